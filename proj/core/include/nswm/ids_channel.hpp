#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nswm {

// Quaternary symbols 0..3; kUnknownSymbol marks an unreadable base (N).
inline constexpr uint8_t kUnknownSymbol = 4;

// Insertion/deletion/substitution channel parameters. Per incoming base,
// a random base is inserted with probability p_ins (at most max_insertions
// times), then the base is deleted with probability p_del or transmitted
// otherwise; a transmitted base is replaced by one of the three other bases
// with probability p_sub. p_trans = 1 - p_ins - p_del is the unique choice
// under which the emission probabilities of a single base sum to one.
struct IdsParams {
    double p_ins = 0.0;
    double p_del = 0.0;
    double p_sub = 0.0;
    int max_insertions = 2;

    double p_trans() const { return 1.0 - p_ins - p_del; }

    // Throws std::invalid_argument when probabilities are out of range.
    void validate() const;

    static IdsParams smrt_profile() { return IdsParams{0.055, 0.055, 0.01, 2}; }
};

struct ChannelCounts {
    uint64_t bases = 0;
    uint64_t insertions = 0;
    uint64_t deletions = 0;
    uint64_t substitutions = 0;
};

// Transmits `seq` through the IDS channel. Deterministic for a given rng
// state. `counts`, when given, accumulates per-event tallies.
std::vector<uint8_t> transmit(std::span<const uint8_t> seq, const IdsParams& params,
                              std::mt19937_64& rng, ChannelCounts* counts = nullptr);

// Per-base emission factors, indexed by received-string length mu and by
// whether the final received symbol matches the transmitted one. Unknown
// received symbols (N) are marginalized uniformly, which collapses the
// match/mismatch pair to p/4.
class EmissionTable {
public:
    explicit EmissionTable(const IdsParams& params);

    int max_run() const { return cap_; }  // longest receivable string, I+1

    double del() const { return del_; }

    double match(int mu) const { return match_[mu]; }
    double mismatch(int mu) const { return mismatch_[mu]; }
    double unknown(int mu) const { return unknown_[mu]; }

    // Row base pointers for the decoder hot loops, indexed by mu in [0, I+1].
    const double* match_row() const { return match_.data(); }
    const double* mismatch_row() const { return mismatch_.data(); }
    const double* unknown_row() const { return unknown_.data(); }

    const double* row_for(uint8_t received_last, uint8_t t) const {
        if (received_last == t) {
            return match_.data();
        }
        return received_last == kUnknownSymbol ? unknown_.data() : mismatch_.data();
    }

    // Emission for a received span ending in `last` given transmitted `t`.
    double value(int mu, uint8_t last, uint8_t t) const {
        if (mu == 0) {
            return del_;
        }
        if (mu > cap_) {
            return 0.0;
        }
        if (last == kUnknownSymbol) {
            return unknown_[mu];
        }
        return last == t ? match_[mu] : mismatch_[mu];
    }

private:
    int cap_;
    double del_;
    std::vector<double> match_;
    std::vector<double> mismatch_;
    std::vector<double> unknown_;
};

// Probability of receiving exactly `received` from the transmission of the
// single symbol `t`. Zero for strings longer than max_insertions + 1.
double emission_prob(std::span<const uint8_t> received, uint8_t t, const IdsParams& params);

}  // namespace nswm
