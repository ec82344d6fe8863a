#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nswm/barcode.hpp"
#include "nswm/chem_filter.hpp"
#include "nswm/outer_code.hpp"

namespace nswm {

// Survivor count as a function of the watermark, with the carriers fixed by
// the code and inner codebook. Evaluations are memoized by watermark string
// since the filter pass over all q^k candidates dominates the search.
class WatermarkObjective {
public:
    WatermarkObjective(const OuterCode& code, const InnerCodebook& codebook, const NucleotideMap& mapping,
                       const FilterThresholds& thresholds, const AdapterContext& adapter);

    int survivors(std::span<const uint8_t> watermark) const;
    int cost(std::span<const uint8_t> watermark) const { return candidate_count_ - survivors(watermark); }

    int candidate_count() const { return candidate_count_; }
    int watermark_length() const { return length_; }
    uint64_t queries() const { return queries_; }
    uint64_t evaluations() const { return evaluations_; }  // memo misses

private:
    int candidate_count_;
    int length_;
    NucleotideMap mapping_;
    std::vector<uint8_t> carriers_;  // candidate_count * length
    mutable ChemFilter filter_;
    mutable std::vector<std::string> sequences_;
    mutable std::unordered_map<std::string, int> memo_;
    mutable uint64_t queries_ = 0;
    mutable uint64_t evaluations_ = 0;
};

struct IlsOptions {
    int restarts = 20;     // perturbation rounds after the first local search
    int perturbation = 0;  // positions changed per restart; 0 = max(2, ceil(l/8))
};

struct IlsHistoryEntry {
    uint64_t step;  // accepted-move counter
    int cost;       // candidates lost under the current watermark
    int survivors;
};

struct IlsResult {
    std::vector<uint8_t> watermark;  // best ever visited
    int cost = 0;
    int survivors = 0;
    bool feasible = false;  // false when every visited watermark lost everything
    std::vector<IlsHistoryEntry> history;
};

// One left-to-right sweep: at each position all four bases are tried and the
// argmin-cost base kept (ties keep the incumbent). Returns whether any
// position changed; `cost` tracks the current watermark's cost.
bool local_pass(const WatermarkObjective& objective, std::vector<uint8_t>& watermark, int& cost,
                std::vector<IlsHistoryEntry>* history = nullptr, uint64_t* step = nullptr);

// Iterated local search: repeated sweeps to a local optimum, then a fixed
// number of random base changes, up to `options.restarts` rounds.
// Deterministic per seed.
IlsResult ils_optimize(const WatermarkObjective& objective, uint64_t seed, const IlsOptions& options = {});

void write_ils_trace(std::ostream& os, std::span<const IlsHistoryEntry> history);

}  // namespace nswm
