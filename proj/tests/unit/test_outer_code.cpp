#include <doctest.h>

#include <stdexcept>
#include <cmath>

#include <random>
#include <set>

#include "nswm/outer_code.hpp"
#include "nswm/rng.hpp"

using namespace nswm;

namespace {

// The five-constraint toy code over GF(8): d1 = x1, d2 = x2, d3 = 2x1 + x2,
// d4 = x1 + x2, d5 = 2x1 + 2x2 (characteristic 2 makes each constraint a
// parity row).
OuterCode toy_gf8_code() {
    FieldTable field(8, 0b1011);
    std::vector<std::vector<OuterCode::Entry>> rows = {
        {{0, 2}, {1, 1}, {2, 1}},
        {{0, 1}, {1, 1}, {3, 1}},
        {{0, 2}, {1, 2}, {4, 1}},
    };
    return OuterCode(std::move(field), 5, 2, 0, std::move(rows));
}

LikelihoodMatrix indicator(const OuterCode& code, std::span<const uint8_t> codeword, double smoothing = 0.0) {
    auto L = LikelihoodMatrix::zeros(code.n(), code.field().order());
    for (int i = 0; i < code.n(); ++i) {
        for (int a = 0; a < code.field().order(); ++a) {
            L.at(i, a) = smoothing;
        }
        L.at(i, codeword[i]) = 1.0;
    }
    return L;
}

}  // namespace

TEST_CASE("toy GF(8) encoder reproduces the hand-computed codeword") {
    const OuterCode code = toy_gf8_code();
    const std::vector<uint8_t> message{2, 1};
    const auto d = code.encode(message);
    CHECK(d == std::vector<uint8_t>{2, 1, 5, 3, 6});
    CHECK(code.satisfies_checks(d));

    CHECK(code.encode(std::vector<uint8_t>{0, 0}) == std::vector<uint8_t>{0, 0, 0, 0, 0});

    for (uint64_t idx = 0; idx < code.message_count(); ++idx) {
        CHECK(code.satisfies_checks(code.encode(code.message_from_index(idx))));
    }
}

TEST_CASE("construct_code yields the advertised shapes") {
    const FieldTable gf16 = FieldTable::with_default_poly(16);
    const OuterCode small = construct_code(gf16, 6, 2, 7);
    CHECK(small.m() == 4);
    CHECK(small.message_count() == 256);

    const OuterCode bigger = construct_code(gf16, 6, 3, 7);
    CHECK(bigger.message_count() == 4096);

    // Structural invariants: row weight >= 2, no duplicate columns.
    for (const auto& code : {small, bigger}) {
        std::set<std::vector<std::pair<int, int>>> columns;
        std::vector<std::vector<std::pair<int, int>>> per_col(code.n());
        for (size_t r = 0; r < code.parity_rows().size(); ++r) {
            CHECK(code.parity_rows()[r].size() >= 2);
            for (const auto& e : code.parity_rows()[r]) {
                per_col[e.col].push_back({static_cast<int>(r), e.val});
            }
        }
        for (const auto& col : per_col) {
            CHECK(!col.empty());
            CHECK(columns.insert(col).second);
        }
    }
}

TEST_CASE("construct_code is deterministic per seed") {
    const FieldTable gf16 = FieldTable::with_default_poly(16);
    const OuterCode a = construct_code(gf16, 12, 3, 42);
    const OuterCode b = construct_code(gf16, 12, 3, 42);
    REQUIRE(a.parity_rows().size() == b.parity_rows().size());
    for (size_t r = 0; r < a.parity_rows().size(); ++r) {
        REQUIRE(a.parity_rows()[r].size() == b.parity_rows()[r].size());
        for (size_t e = 0; e < a.parity_rows()[r].size(); ++e) {
            CHECK(a.parity_rows()[r][e].col == b.parity_rows()[r][e].col);
            CHECK(a.parity_rows()[r][e].val == b.parity_rows()[r][e].val);
        }
    }
}

TEST_CASE("encode rejects malformed messages") {
    const OuterCode code = toy_gf8_code();
    CHECK_THROWS_AS(code.encode(std::vector<uint8_t>{1}), std::invalid_argument);
    CHECK_THROWS_AS(code.encode(std::vector<uint8_t>{8, 0}), std::invalid_argument);
}

TEST_CASE("bp_decode: codeword indicators decode in zero iterations") {
    const OuterCode code = toy_gf8_code();
    for (uint64_t idx = 0; idx < code.message_count(); ++idx) {
        const auto message = code.message_from_index(idx);
        const auto L = indicator(code, code.encode(message));
        const auto outcome = bp_decode(code, L, 10);
        REQUIRE(outcome.status == DecodeStatus::decoded);
        CHECK(outcome.iterations == 0);
        CHECK(outcome.message == message);
    }
}

TEST_CASE("bp_decode: zero-noise exactness holds exhaustively at q^k = 4096") {
    const FieldTable gf16 = FieldTable::with_default_poly(16);
    const OuterCode code = construct_code(gf16, 6, 3, 5);
    for (uint64_t idx = 0; idx < code.message_count(); ++idx) {
        const auto message = code.message_from_index(idx);
        const auto outcome = bp_decode(code, indicator(code, code.encode(message)), 10);
        REQUIRE(outcome.status == DecodeStatus::decoded);
        REQUIRE(outcome.message == message);
    }
}

TEST_CASE("bp_decode: uniform likelihoods hard-threshold to the zero codeword") {
    // The all-zero codeword satisfies every check, and ties break to the
    // lowest symbol, so a fully uninformative matrix decodes to message 0
    // immediately rather than failing.
    const OuterCode code = toy_gf8_code();
    auto L = LikelihoodMatrix::zeros(code.n(), 8);
    for (auto& v : L.values) {
        v = 1.0 / 8;
    }
    const auto outcome = bp_decode(code, L, 10);
    REQUIRE(outcome.status == DecodeStatus::decoded);
    CHECK(outcome.iterations == 0);
    CHECK(outcome.message == std::vector<uint8_t>{0, 0});
}

TEST_CASE("bp_decode recovers single-symbol corruptions and matches ml_decode") {
    const OuterCode code = toy_gf8_code();
    for (uint64_t idx = 0; idx < code.message_count(); ++idx) {
        const auto message = code.message_from_index(idx);
        const auto codeword = code.encode(message);
        for (int corrupt_pos : {0, 2, 4}) {
            auto L = indicator(code, codeword, 0.02);
            for (int a = 0; a < 8; ++a) {
                L.at(corrupt_pos, a) = 0.02;
            }
            L.at(corrupt_pos, (codeword[corrupt_pos] + 3) % 8) = 1.0;
            const auto outcome = bp_decode(code, L, 10);
            REQUIRE(outcome.status == DecodeStatus::decoded);
            CHECK(outcome.message == message);
            CHECK(ml_decode(code, L) == message);
        }
    }
}

TEST_CASE("decoded implies valid, and more iterations never lose a decode") {
    const OuterCode code = toy_gf8_code();
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int decoded_count = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto L = LikelihoodMatrix::zeros(code.n(), 8);
        for (auto& v : L.values) {
            v = std::pow(unit(rng), 3.0);
        }
        const auto short_run = bp_decode(code, L, 3);
        const auto long_run = bp_decode(code, L, 10);
        if (short_run.status == DecodeStatus::decoded) {
            ++decoded_count;
            const auto re = code.encode(short_run.message);
            CHECK(code.satisfies_checks(re));
            REQUIRE(long_run.status == DecodeStatus::decoded);
            CHECK(long_run.message == short_run.message);
            CHECK(long_run.iterations == short_run.iterations);
        }
    }
    CHECK(decoded_count > 0);
}

TEST_CASE("ml_decode agrees with a brute-force product maximization") {
    const OuterCode code = toy_gf8_code();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto L = LikelihoodMatrix::zeros(code.n(), 8);
        for (auto& v : L.values) {
            v = unit(rng);
        }
        uint64_t best_idx = 0;
        double best_score = -1.0;
        for (uint64_t idx = 0; idx < code.message_count(); ++idx) {
            const auto cw = code.encode(code.message_from_index(idx));
            double score = 1.0;
            for (int i = 0; i < code.n(); ++i) {
                score *= L.at(i, cw[i]);
            }
            if (score > best_score) {
                best_score = score;
                best_idx = idx;
            }
        }
        CHECK(ml_decode(code, L) == code.message_from_index(best_idx));
    }
}

TEST_CASE("ml_decode ties break to the lowest message index") {
    const OuterCode code = toy_gf8_code();
    auto L = LikelihoodMatrix::zeros(code.n(), 8);
    for (auto& v : L.values) {
        v = 0.125;
    }
    CHECK(ml_decode(code, L) == std::vector<uint8_t>{0, 0});
}

TEST_CASE("likelihood row normalization rejects all-zero rows") {
    auto L = LikelihoodMatrix::zeros(2, 4);
    L.at(0, 1) = 1.0;
    CHECK_THROWS_AS(L.normalize_rows(), std::domain_error);
}

TEST_CASE("message indexing is big-endian in the first symbol") {
    const OuterCode code = toy_gf8_code();
    CHECK(code.index_from_message(std::vector<uint8_t>{2, 1}) == 17);
    CHECK(code.message_from_index(17) == std::vector<uint8_t>{2, 1});
}
