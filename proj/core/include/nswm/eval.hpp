#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "nswm/barcode_set.hpp"
#include "nswm/demux.hpp"
#include "nswm/ids_channel.hpp"

namespace nswm {

// 95% interval p * exp(+-2 sigma) with sigma = sqrt((1-p)/(N p)); the
// zero-rate rule gives [0, 1 - exp(-2/N)].
std::pair<double, double> confidence_interval(double p_bar, uint64_t n);

struct MonteCarloReport {
    uint64_t n = 0;
    uint64_t correct = 0;
    uint64_t misassigned = 0;
    uint64_t discarded = 0;
    uint64_t unassignable = 0;
    IdsParams params;
    uint64_t seed = 0;
    int max_iters = 10;
    int sample_count = 0;

    // Read loss: every read the pipeline did not assign.
    double p_e() const { return n == 0 ? 0.0 : static_cast<double>(discarded + unassignable) / n; }
    // Misassignment: assigned to the wrong sample.
    double p_u() const { return n == 0 ? 0.0 : static_cast<double>(misassigned) / n; }
};

struct EvalOptions {
    int max_iters = 10;
    int threads = 0;
    int insert_len = 64;
    bool uniform_boundaries = false;
};

// Clean read layout used by both the simulator and the Monte Carlo harness:
// flank + barcode(sample_row) + consensus + random insert.
std::vector<uint8_t> synth_read_symbols(const BarcodeSet& set, uint64_t sample_row, int insert_len,
                                        std::mt19937_64& rng);

// N reads cycling uniformly over the filtered barcodes, transmitted through
// the IDS channel and demultiplexed. Per-read RNG streams are keyed by
// (seed, read index), so results do not depend on the worker count.
MonteCarloReport run_experiment(const BarcodeSet& set, const IdsParams& params, uint64_t n, uint64_t seed,
                                const EvalOptions& options = {});

void write_report(std::ostream& os, const MonteCarloReport& report);

struct SweepPoint {
    double p_mut;
    MonteCarloReport report;
};

// Evaluates p_mut in [lo, hi] over `steps` points with p_i = p_d = p_s =
// p_mut / 3.
std::vector<SweepPoint> run_sweep(const BarcodeSet& set, double lo, double hi, int steps, int max_insertions,
                                  uint64_t n, uint64_t seed, const EvalOptions& options = {});

void write_sweep(std::ostream& os, std::span<const SweepPoint> points);

}  // namespace nswm
