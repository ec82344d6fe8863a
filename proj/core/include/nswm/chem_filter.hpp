#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nswm {

struct FilterThresholds {
    double gc_min = 0.35;
    double gc_max = 0.65;
    int max_homopolymer = 5;
    int max_heteroduplex = 6;
    int max_hairpin = 6;

    void validate() const;  // throws std::invalid_argument
};

// Known sequences the barcode must not pair with: the adapter-side flank to
// its left and the consensus region to its right.
struct AdapterContext {
    std::string left_flank;
    std::string right_flank;
};

std::string reverse_complement(std::string_view seq);

// (#G + #C) / length. Throws on empty or non-ACGT input.
double gc_content(std::string_view seq);

// Longest run of a single base.
int max_homopolymer(std::string_view seq);

// Longest stem such that a substring and the reverse complement of a later
// substring pair perfectly with a loop of at least 3 bases between them.
int hairpin_len(std::string_view seq);

// Longest substring of `a` whose reverse complement occurs in `b`
// (symmetric in its arguments).
int heteroduplex_len(std::string_view a, std::string_view b);

enum class FilterRule {
    gc,
    homopolymer,
    hairpin,
    heteroduplex_adapter,
    heteroduplex_cross,
};

std::string_view filter_rule_name(FilterRule rule);

struct Rejection {
    uint64_t candidate_index;
    FilterRule rule;  // first violated rule
    double measured;
    double threshold;
};

struct FilterOutcome {
    std::vector<uint32_t> survivors;  // indices into the input, ascending
    std::vector<Rejection> rejections;
};

// Individual checks plus a greedy cross-compatibility pass in input order:
// a candidate is dropped when its heteroduplex with an already-kept barcode
// or with the adapter context exceeds the threshold. Deterministic and
// order-stable. Reusable across calls; scratch tables persist.
class ChemFilter {
public:
    ChemFilter(FilterThresholds thresholds, AdapterContext adapter);

    const FilterThresholds& thresholds() const { return thresholds_; }
    const AdapterContext& adapter() const { return adapter_; }

    FilterOutcome run(std::span<const std::string> candidates, bool want_report) const;

    // Survivor count only; the fast path for watermark search.
    int count_survivors(std::span<const std::string> candidates) const;

private:
    FilterThresholds thresholds_;
    AdapterContext adapter_;
    int kmer_len_ = 0;                    // heteroduplex screen, threshold + 1
    std::vector<uint32_t> adapter_kmers_;  // sorted packed k-mers of both flanks

    mutable std::vector<int32_t> kept_owner_;  // packed k-mer -> first kept index
    mutable std::vector<uint64_t> kept_stamp_;
    mutable std::vector<uint64_t> hairpin_stamp_;  // packed k-mer seen in current candidate
    mutable uint64_t run_stamp_ = 0;
    mutable uint64_t candidate_stamp_ = 0;
};

void write_rejection_report(std::ostream& os, std::span<const Rejection> rejections);

}  // namespace nswm
