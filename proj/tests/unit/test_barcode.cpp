#include <doctest.h>

#include <stdexcept>

#include <random>
#include <set>

#include "nswm/barcode.hpp"
#include "nswm/ids_channel.hpp"

using namespace nswm;

TEST_CASE("default nucleotide mapping and roundtrips") {
    const NucleotideMap map;
    CHECK(map.encode(std::vector<uint8_t>{0, 1, 2, 3}) == "ACGT");
    CHECK(map.decode("ACGT") == std::vector<uint8_t>{0, 1, 2, 3});

    const NucleotideMap remapped = NucleotideMap::from_string("TGCA");
    CHECK(remapped.encode(std::vector<uint8_t>{0, 1, 2, 3}) == "TGCA");

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> base(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<uint8_t> symbols(32);
        for (auto& s : symbols) {
            s = static_cast<uint8_t>(base(rng));
        }
        CHECK(map.decode(map.encode(symbols)) == symbols);
        CHECK(remapped.decode(remapped.encode(symbols)) == symbols);
    }

    CHECK_THROWS_AS(map.decode("ACGN"), std::invalid_argument);
    CHECK(map.decode_lenient("ANT") == std::vector<uint8_t>{0, kUnknownSymbol, 3});
    CHECK_THROWS_AS(NucleotideMap::from_string("AACG"), std::invalid_argument);
    CHECK_THROWS_AS(NucleotideMap::from_string("ACGU"), std::invalid_argument);
}

TEST_CASE("inner codebook search") {
    SUBCASE("q=4, u=1 gives the four singletons") {
        const InnerCodebook cb = build_inner_codebook(4, 1, 3);
        CHECK(cb.min_distance == 1);
        std::set<uint8_t> seen(cb.words.begin(), cb.words.end());
        CHECK(seen.size() == 4);
    }
    SUBCASE("q=8, u=4 reaches distance 3") {
        const InnerCodebook cb = build_inner_codebook(8, 4, 3);
        CHECK(cb.min_distance >= 3);
        CHECK(min_pairwise_distance(cb) == cb.min_distance);
    }
    SUBCASE("q=16, u=4 records the true minimum distance") {
        const InnerCodebook cb = build_inner_codebook(16, 4, 3);
        CHECK(min_pairwise_distance(cb) == cb.min_distance);
        CHECK(cb.min_distance >= 2);
    }
    SUBCASE("deterministic per seed") {
        CHECK(build_inner_codebook(16, 4, 9).words == build_inner_codebook(16, 4, 9).words);
    }
    SUBCASE("q > 4^u is rejected") {
        CHECK_THROWS_AS(build_inner_codebook(8, 1, 1), std::invalid_argument);
    }
}

TEST_CASE("expand concatenates codebook words") {
    const InnerCodebook cb = build_inner_codebook(8, 3, 1);
    const std::vector<uint8_t> single{5};
    const auto e5 = expand(single, cb);
    CHECK(e5 == std::vector<uint8_t>(cb.word(5).begin(), cb.word(5).end()));

    const std::vector<uint8_t> codeword{1, 4, 7, 0, 2};  // Fig-1 shape: n=5, u=3
    CHECK(expand(codeword, cb).size() == 15);

    CHECK_THROWS_AS(expand(std::vector<uint8_t>{8}, cb), std::invalid_argument);
}

TEST_CASE("imprinting is a self-inverse GF(4) addition") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> base(0, 3);
    std::vector<uint8_t> carrier(24);
    std::vector<uint8_t> watermark(24);
    for (int i = 0; i < 24; ++i) {
        carrier[i] = static_cast<uint8_t>(base(rng));
        watermark[i] = static_cast<uint8_t>(base(rng));
    }
    const std::vector<uint8_t> zeros(24, 0);
    CHECK(imprint(carrier, zeros) == carrier);
    CHECK(imprint(carrier, carrier) == zeros);
    CHECK(unimprint(imprint(carrier, watermark), watermark) == carrier);
    CHECK_THROWS_AS(imprint(carrier, std::vector<uint8_t>(10, 0)), std::invalid_argument);
}

TEST_CASE("candidate sets have q^k distinct members in message order") {
    const FieldTable gf16 = FieldTable::with_default_poly(16);
    const OuterCode code = construct_code(gf16, 6, 2, 7);
    const InnerCodebook cb = build_inner_codebook(16, 4, 7);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> base(0, 3);
    std::vector<uint8_t> watermark(24);
    for (auto& w : watermark) {
        w = static_cast<uint8_t>(base(rng));
    }
    const auto candidates = build_candidate_set(code, cb, watermark, NucleotideMap());
    REQUIRE(candidates.size() == 256);
    std::set<std::string> distinct;
    for (size_t i = 0; i < candidates.size(); ++i) {
        CHECK(candidates[i].message_index == i);
        CHECK(candidates[i].nucleotides.size() == 24);
        distinct.insert(candidates[i].nucleotides);
    }
    CHECK(distinct.size() == 256);

    // Imprinting preserves pairwise Hamming distances.
    std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto& a = candidates[pick(rng)];
        const auto& b = candidates[pick(rng)];
        int carrier_dist = 0;
        int imprint_dist = 0;
        for (int i = 0; i < 24; ++i) {
            carrier_dist += a.carrier[i] != b.carrier[i];
            imprint_dist += a.imprinted[i] != b.imprinted[i];
        }
        CHECK(carrier_dist == imprint_dist);
    }
}

TEST_CASE("candidate minimum distance matches a quadratic scan") {
    const FieldTable gf8 = FieldTable::with_default_poly(8);
    const OuterCode code = construct_code(gf8, 3, 2, 11);
    const InnerCodebook cb = build_inner_codebook(8, 3, 11);
    const std::vector<uint8_t> watermark(9, 1);
    const auto candidates = build_candidate_set(code, cb, watermark, NucleotideMap());
    REQUIRE(candidates.size() == 64);

    int min_imprinted = 1000;
    int min_carrier = 1000;
    for (size_t a = 0; a < candidates.size(); ++a) {
        for (size_t b = a + 1; b < candidates.size(); ++b) {
            int di = 0;
            int dc = 0;
            for (size_t i = 0; i < candidates[a].imprinted.size(); ++i) {
                di += candidates[a].imprinted[i] != candidates[b].imprinted[i];
                dc += candidates[a].carrier[i] != candidates[b].carrier[i];
            }
            min_imprinted = std::min(min_imprinted, di);
            min_carrier = std::min(min_carrier, dc);
        }
    }
    CHECK(min_imprinted == min_carrier);
    CHECK(min_imprinted >= 1);
}

TEST_CASE("large GF(16) configuration: 65536 candidates of length 96") {
    const FieldTable gf16 = FieldTable::with_default_poly(16);
    const OuterCode code = construct_code(gf16, 24, 4, 7);
    const InnerCodebook cb = build_inner_codebook(16, 4, 7);
    const std::vector<uint8_t> watermark(96, 2);
    const auto candidates = build_candidate_set(code, cb, watermark, NucleotideMap());
    CHECK(candidates.size() == 65536);
    CHECK(candidates.front().nucleotides.size() == 96);
    CHECK(candidates.back().nucleotides.size() == 96);
}
