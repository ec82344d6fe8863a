#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nswm/barcode.hpp"
#include "nswm/ids_channel.hpp"
#include "nswm/outer_code.hpp"

namespace nswm {

// Drift windows: X bounds the cumulative drift over the whole modeled span,
// Delta the drift change across a single outer symbol.
struct DriftWindow {
    int x_min = -6;
    int x_max = 6;
    int d_min = 0;
    int d_max = 0;

    int width() const { return x_max - x_min + 1; }

    // Sized from the modeled transmission length (flanks included): four
    // standard deviations of the indel random walk plus a safety margin.
    static DriftWindow for_span(int modeled_len, const IdsParams& params, int u);
};

// Nonnegative weights over [lo, lo + weights.size()) drift values, anchored
// at some expected read position. Kept normalized; log_scale restores the
// absolute scale.
struct DriftDistribution {
    int lo = 0;
    std::vector<double> weights;
    double log_scale = 0.0;

    static DriftDistribution point(const DriftWindow& window, int drift);
    static DriftDistribution uniform(const DriftWindow& window);

    // Scales weights to sum 1, folding the factor into log_scale.
    // Returns false (leaving weights zero) when all mass is gone.
    bool normalize();

    bool is_zero() const;
    double at(int drift) const;
};

// One-symbol forward step of the nucleotide-level drift HMM. `in` and `out`
// span drifts [x_lo, x_lo + width); `pos` is the expected read index of the
// transmitted symbol `t`. Read symbols beyond the read end make a path
// impossible; deletions consume nothing and stay allowed.
void drift_forward_step(const EmissionTable& emissions, std::span<const uint8_t> read, int pos, uint8_t t,
                        int x_lo, std::span<const double> in, std::span<double> out);

// Backward analogue: `in` holds the distribution after the symbol, `out`
// receives the one before it.
void drift_backward_step(const EmissionTable& emissions, std::span<const uint8_t> read, int pos, uint8_t t,
                         int x_lo, std::span<const double> in, std::span<double> out);

// P(received | transmitted) for one outer-symbol block: nucleotide-level
// forward pass with point-mass boundary at drift 0, evaluated at the final
// drift len(received) - len(transmitted).
double block_likelihood(std::span<const uint8_t> received, std::span<const uint8_t> transmitted,
                        const IdsParams& params);

// Symbol-level forward-backward decoder for one barcode set configuration.
// Reads are lenient quaternary symbols (kUnknownSymbol for N); s0 is the
// expected read index of the barcode start.
class ReadDecoder {
public:
    ReadDecoder(const InnerCodebook& codebook, std::span<const uint8_t> watermark, const IdsParams& params,
                const DriftWindow& window);

    int n() const { return n_; }
    int q() const { return q_; }
    int u() const { return u_; }
    const DriftWindow& window() const { return window_; }

    struct Result {
        bool ok = false;
        LikelihoodMatrix likelihoods;            // n x q, rows normalized, scale recorded
        std::vector<DriftDistribution> forward;  // F_1 .. F_{n+1}
        std::vector<DriftDistribution> backward; // B_1 .. B_{n+1}
        double total_log_forward = 0.0;          // accumulated at the right boundary
        double total_log_backward = 0.0;         // accumulated at the left boundary
    };

    Result decode(std::span<const uint8_t> read, int s0, const DriftDistribution& f1,
                  const DriftDistribution& bn1) const;

    std::vector<DriftDistribution> forward_pass(std::span<const uint8_t> read, int s0,
                                                const DriftDistribution& f1) const;
    std::vector<DriftDistribution> backward_pass(std::span<const uint8_t> read, int s0,
                                                 const DriftDistribution& bn1) const;

private:
    // Transmitted symbol of block i, hypothesis a, offset y (codebook word
    // imprinted with the matching watermark slice).
    uint8_t block_symbol(int i, int a, int y) const {
        return blocks_[(static_cast<size_t>(i) * q_ + a) * u_ + y];
    }

    DriftDistribution aligned(const DriftDistribution& d) const;

    int n_;
    int q_;
    int u_;
    IdsParams params_;
    EmissionTable emissions_;
    DriftWindow window_;
    std::vector<uint8_t> blocks_;  // n * q * u
};

}  // namespace nswm
