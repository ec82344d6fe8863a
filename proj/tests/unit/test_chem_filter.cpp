#include <doctest.h>

#include <stdexcept>

#include <random>
#include <sstream>

#include "nswm/chem_filter.hpp"
#include "oracles.hpp"

using namespace nswm;

namespace {

std::string random_seq(std::mt19937_64& rng, int len) {
    static constexpr char kBases[] = "ACGT";
    std::uniform_int_distribution<int> pick(0, 3);
    std::string s(len, 'A');
    for (auto& c : s) {
        c = kBases[pick(rng)];
    }
    return s;
}

// Reference greedy filter built on the exact scan primitives only.
std::vector<uint32_t> reference_filter(const std::vector<std::string>& seqs, const AdapterContext& adapter,
                                       const FilterThresholds& t) {
    std::vector<uint32_t> kept;
    for (uint32_t i = 0; i < seqs.size(); ++i) {
        const auto& s = seqs[i];
        const double gc = gc_content(s);
        if (gc < t.gc_min || gc > t.gc_max) {
            continue;
        }
        if (max_homopolymer(s) > t.max_homopolymer) {
            continue;
        }
        if (nswm::testing::brute_force_hairpin(s) > t.max_hairpin) {
            continue;
        }
        if (nswm::testing::brute_force_heteroduplex(s, adapter.left_flank) > t.max_heteroduplex ||
            nswm::testing::brute_force_heteroduplex(s, adapter.right_flank) > t.max_heteroduplex) {
            continue;
        }
        bool clash = false;
        for (uint32_t k : kept) {
            if (nswm::testing::brute_force_heteroduplex(s, seqs[k]) > t.max_heteroduplex) {
                clash = true;
                break;
            }
        }
        if (!clash) {
            kept.push_back(i);
        }
    }
    return kept;
}

}  // namespace

TEST_CASE("gc content basics") {
    CHECK(gc_content("ATGC") == doctest::Approx(0.5));
    CHECK(gc_content("AAAA") == doctest::Approx(0.0));
    CHECK(gc_content("GGCC") == doctest::Approx(1.0));
    CHECK_THROWS_AS(gc_content(""), std::invalid_argument);
    CHECK_THROWS_AS(gc_content("ACGN"), std::invalid_argument);
}

TEST_CASE("homopolymer runs") {
    CHECK(max_homopolymer("AAAAA") == 5);
    CHECK(max_homopolymer("CAAAAAAG") == 6);
    CHECK(max_homopolymer("ACGT") == 1);
}

TEST_CASE("hairpin and heteroduplex match hand-checked examples") {
    CHECK(heteroduplex_len("ACGTACGT", reverse_complement("ACGTACGT")) == 8);
    CHECK(heteroduplex_len("AAAAAAAA", "AAAAAAAA") == 0);
    CHECK(hairpin_len("GGGGAAATCCCC") >= 4);
    CHECK(hairpin_len("GGGGAAATCCCC") == nswm::testing::brute_force_hairpin("GGGGAAATCCCC"));
}

TEST_CASE("scan primitives agree with brute force on random strings") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 120; ++trial) {
        const std::string a = random_seq(rng, 8 + trial % 17);
        const std::string b = random_seq(rng, 8 + (trial * 7) % 17);
        CHECK(hairpin_len(a) == nswm::testing::brute_force_hairpin(a));
        CHECK(heteroduplex_len(a, b) == nswm::testing::brute_force_heteroduplex(a, b));
        CHECK(heteroduplex_len(a, b) == heteroduplex_len(b, a));
    }
}

TEST_CASE("vacuous thresholds keep every candidate") {
    FilterThresholds t;
    t.gc_min = 0.0;
    t.gc_max = 1.0;
    t.max_homopolymer = 1000;
    t.max_heteroduplex = 1000;
    t.max_hairpin = 1000;
    std::mt19937_64 rng(23);
    std::vector<std::string> seqs;
    for (int i = 0; i < 64; ++i) {
        seqs.push_back(random_seq(rng, 24));
    }
    const ChemFilter filter(t, AdapterContext{"ACGTACGTACGT", "TTGACGATCGTTGGCA"});
    const auto outcome = filter.run(seqs, true);
    CHECK(outcome.survivors.size() == seqs.size());
    CHECK(outcome.rejections.empty());
}

TEST_CASE("a GGGGGG homopolymer is always rejected with the homopolymer rule") {
    const std::vector<std::string> seqs = {"ACGGGGGGTACGTACGTCAGATCA"};
    const ChemFilter filter(FilterThresholds{}, AdapterContext{"", ""});
    const auto outcome = filter.run(seqs, true);
    CHECK(outcome.survivors.empty());
    REQUIRE(outcome.rejections.size() == 1);
    CHECK(outcome.rejections[0].rule == FilterRule::homopolymer);
    CHECK(outcome.rejections[0].measured == 6);
    CHECK(outcome.rejections[0].threshold == 5);
}

TEST_CASE("cross-compatibility drops a later barcode pairing with a kept one") {
    // The second sequence embeds the reverse complement of a 7-base prefix
    // of the first; both pass every individual check on their own.
    const std::string first = "GCATACGCCTTTACTTGCTGTGTC";
    const std::string second = "AAACAGAACGTATGCCTCGGGTAA";
    REQUIRE(heteroduplex_len(first, second) == 7);
    const std::vector<std::string> seqs = {first, second};
    const FilterThresholds t;
    const ChemFilter filter(t, AdapterContext{"", ""});
    const auto outcome = filter.run(seqs, true);
    REQUIRE(outcome.survivors.size() == 1);
    CHECK(outcome.survivors[0] == 0);
    REQUIRE(outcome.rejections.size() == 1);
    CHECK(outcome.rejections[0].rule == FilterRule::heteroduplex_cross);
    CHECK(outcome.rejections[0].measured >= 7);
}

TEST_CASE("exactly-at-threshold duplexes pass, one more base fails") {
    const std::string target = "ACGTCAGCACGAAACTTGTTGGCC";
    const FilterThresholds t;
    SUBCASE("six-base complement passes") {
        const std::string probe = "CAGTGTGAATGACGTTCGCTTAAG";
        REQUIRE(heteroduplex_len(target, probe) == 6);
        const ChemFilter filter(t, AdapterContext{"", ""});
        const auto outcome = filter.run(std::vector<std::string>{target, probe}, true);
        CHECK(outcome.survivors.size() == 2);
    }
    SUBCASE("seven-base complement fails") {
        const std::string probe = "GGTTAAGTACTGACGTAGTGTGAT";
        REQUIRE(heteroduplex_len(target, probe) == 7);
        const ChemFilter filter(t, AdapterContext{"", ""});
        const auto outcome = filter.run(std::vector<std::string>{target, probe}, true);
        CHECK(outcome.survivors.size() == 1);
    }
}

TEST_CASE("adapter clashes are cited as heteroduplex_adapter") {
    const std::string flank = "TTTTGACAGGTC";
    const std::string candidate = "TCCTGACCTGTCAAAGTGCGTGGA";  // embeds rc(flank[2..10))
    REQUIRE(heteroduplex_len(candidate, flank) >= 8);
    const ChemFilter filter(FilterThresholds{}, AdapterContext{flank, ""});
    const auto outcome = filter.run(std::vector<std::string>{candidate}, true);
    REQUIRE(outcome.rejections.size() == 1);
    CHECK(outcome.rejections[0].rule == FilterRule::heteroduplex_adapter);
    CHECK(outcome.rejections[0].measured >= 8);
}

TEST_CASE("k-mer screened filter equals the exact reference on random sets") {
    std::mt19937_64 rng(31);
    const AdapterContext adapter{"TCGTAGAGTGAT", "ATGGCAGAATGTGATAGTCGGTTGTGGAGC"};
    FilterThresholds t;  // defaults
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<std::string> seqs;
        for (int i = 0; i < 150; ++i) {
            seqs.push_back(random_seq(rng, 24));
        }
        const ChemFilter filter(t, adapter);
        const auto outcome = filter.run(seqs, true);
        const auto expected = reference_filter(seqs, adapter, t);
        CHECK(outcome.survivors == expected);
        CHECK(outcome.survivors.size() + outcome.rejections.size() == seqs.size());
        // Each rejection cites exactly one first-violated rule and its value.
        for (const auto& r : outcome.rejections) {
            CHECK(r.measured >= 0);
        }
    }
}

TEST_CASE("filter runs are deterministic and reusable") {
    std::mt19937_64 rng(41);
    std::vector<std::string> seqs;
    for (int i = 0; i < 80; ++i) {
        seqs.push_back(random_seq(rng, 24));
    }
    const ChemFilter filter(FilterThresholds{}, AdapterContext{"TCGTAGAGTGAT", "ATGGCA"});
    const auto first = filter.run(seqs, true);
    const auto second = filter.run(seqs, true);
    CHECK(first.survivors == second.survivors);
    CHECK(filter.count_survivors(seqs) == static_cast<int>(first.survivors.size()));
}

TEST_CASE("rejection report format") {
    std::ostringstream os;
    const std::vector<Rejection> rejections = {{3, FilterRule::gc, 0.25, 0.35}};
    write_rejection_report(os, rejections);
    CHECK(os.str() == "candidate\trule\tmeasured\tthreshold\n3\tgc_content\t0.25\t0.35\n");
}
