#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nswm/gf.hpp"

namespace nswm {

// Per-symbol likelihoods L[i][a] handed from the inner to the outer decoder.
// Rows are normalized to sum to one; log_scale[i] restores absolute values
// (absolute L = value * exp(log_scale)). Belief propagation is invariant to
// per-row positive scaling.
struct LikelihoodMatrix {
    int n = 0;
    int q = 0;
    std::vector<double> values;     // n * q, row-major
    std::vector<double> log_scale;  // per row

    static LikelihoodMatrix zeros(int n, int q);

    double& at(int i, int a) { return values[static_cast<size_t>(i) * q + a]; }
    double at(int i, int a) const { return values[static_cast<size_t>(i) * q + a]; }
    std::span<const double> row(int i) const { return {values.data() + static_cast<size_t>(i) * q, static_cast<size_t>(q)}; }

    // Scales each row to sum 1, folding the factor into log_scale.
    // Throws std::domain_error on an all-zero row.
    void normalize_rows();
};

enum class DecodeStatus { decoded, failure };

struct DecodeOutcome {
    DecodeStatus status = DecodeStatus::failure;
    std::vector<uint8_t> message;  // k symbols when decoded
    int iterations = 0;
};

struct CodeConstructionOptions {
    int max_attempts = 200;
    // When q^k is small enough to enumerate, candidate matrices from several
    // attempts are compared and the one with the best minimum distance wins.
    bool optimize_distance = true;
    int distance_attempts = 24;
    int column_weight = 0;  // 0 = auto: 2 for n <= 12, 3 otherwise
};

// Systematic linear code over GF(q) with a sparse parity-check matrix.
class OuterCode {
public:
    struct Entry {
        int col;
        uint8_t val;
    };

    OuterCode(FieldTable field, int n, int k, uint64_t seed, std::vector<std::vector<Entry>> rows);

    const FieldTable& field() const { return field_; }
    int n() const { return n_; }
    int k() const { return k_; }
    int m() const { return n_ - k_; }
    uint64_t seed() const { return seed_; }
    uint64_t message_count() const;

    const std::vector<std::vector<Entry>>& parity_rows() const { return rows_; }

    // Systematic encoding: the first k codeword symbols equal the message.
    std::vector<uint8_t> encode(std::span<const uint8_t> message) const;

    bool satisfies_checks(std::span<const uint8_t> codeword) const;

    // Message <-> index, first symbol most significant.
    std::vector<uint8_t> message_from_index(uint64_t index) const;
    uint64_t index_from_message(std::span<const uint8_t> message) const;

    // Minimum Hamming distance by codeword enumeration (guard q^k <= 2^20).
    int min_distance() const;

private:
    FieldTable field_;
    int n_;
    int k_;
    uint64_t seed_;
    std::vector<std::vector<Entry>> rows_;
    std::vector<uint8_t> encoder_;  // m x k dense, parity = encoder * message
};

// Random column-regular sparse construction (column weight 2 for n <= 12,
// 3 otherwise; see CodeConstructionOptions to override), rejecting 4-cycles
// when possible. Retries with derived seeds
// until the parity submatrix on the last m columns is invertible; throws
// std::runtime_error with seed advice after options.max_attempts failures.
OuterCode construct_code(const FieldTable& field, int n, int k, uint64_t seed,
                         const CodeConstructionOptions& options = {});

// Flooding-schedule sum-product decoding. Beliefs are hard-thresholded
// (ties to the lowest symbol) before iterating and after every iteration;
// the first satisfying codeword wins.
DecodeOutcome bp_decode(const OuterCode& code, const LikelihoodMatrix& L, int max_iters);

// Exhaustive maximum-likelihood decoding; test oracle and trade-off
// baseline. Ties break to the lowest message index. Throws when q^k > 2^20.
std::vector<uint8_t> ml_decode(const OuterCode& code, const LikelihoodMatrix& L);

}  // namespace nswm
