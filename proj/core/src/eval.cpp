#include "nswm/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "nswm/parallel.hpp"
#include "nswm/rng.hpp"

namespace nswm {

std::pair<double, double> confidence_interval(double p_bar, uint64_t n) {
    if (p_bar < 0.0 || p_bar > 1.0 || n < 1) {
        throw std::invalid_argument("need 0 <= p <= 1 and n >= 1");
    }
    if (p_bar == 0.0) {
        return {0.0, 1.0 - std::exp(-2.0 / static_cast<double>(n))};
    }
    const double sigma = std::sqrt((1.0 - p_bar) / (static_cast<double>(n) * p_bar));
    return {p_bar * std::exp(-2.0 * sigma), p_bar * std::exp(2.0 * sigma)};
}

std::vector<uint8_t> synth_read_symbols(const BarcodeSet& set, uint64_t sample_row, int insert_len,
                                        std::mt19937_64& rng) {
    const auto& sample = set.samples().at(sample_row);
    const auto flank = set.mapping().decode(set.flank());
    const auto barcode = set.mapping().decode(sample.barcode);
    const auto consensus = set.mapping().decode(set.consensus());

    std::vector<uint8_t> read;
    read.reserve(flank.size() + barcode.size() + consensus.size() + insert_len);
    read.insert(read.end(), flank.begin(), flank.end());
    read.insert(read.end(), barcode.begin(), barcode.end());
    read.insert(read.end(), consensus.begin(), consensus.end());
    std::uniform_int_distribution<int> base(0, 3);
    for (int i = 0; i < insert_len; ++i) {
        read.push_back(static_cast<uint8_t>(base(rng)));
    }
    return read;
}

MonteCarloReport run_experiment(const BarcodeSet& set, const IdsParams& params, uint64_t n, uint64_t seed,
                                const EvalOptions& options) {
    params.validate();
    if (set.samples().empty()) {
        throw std::invalid_argument("barcode set has no samples");
    }
    DemuxOptions demux_options;
    demux_options.max_iters = options.max_iters;
    demux_options.uniform_boundaries = options.uniform_boundaries;
    const Demultiplexer demux(set, params, demux_options);

    const uint64_t b = set.samples().size();
    const int workers = effective_threads(options.threads);
    struct Tally {
        uint64_t correct = 0;
        uint64_t misassigned = 0;
        uint64_t discarded = 0;
        uint64_t unassignable = 0;
    };
    std::vector<Tally> tallies(std::max(1, workers));

    parallel_for(n, workers, [&](uint64_t begin, uint64_t end, int worker) {
        Tally& tally = tallies[worker];
        for (uint64_t i = begin; i < end; ++i) {
            const uint64_t row = i % b;
            auto rng = make_stream(seed, i);
            const auto clean = synth_read_symbols(set, row, options.insert_len, rng);
            const auto noisy = transmit(clean, params, rng);
            const DemuxResult result = demux.demultiplex_symbols(noisy);
            switch (result.status) {
                case ReadStatus::assigned:
                    if (result.sample_id == static_cast<int64_t>(set.samples()[row].id)) {
                        tally.correct += 1;
                    } else {
                        tally.misassigned += 1;
                    }
                    break;
                case ReadStatus::discarded:
                    tally.discarded += 1;
                    break;
                case ReadStatus::unassignable:
                    tally.unassignable += 1;
                    break;
            }
        }
    });

    MonteCarloReport report;
    report.n = n;
    report.params = params;
    report.seed = seed;
    report.max_iters = options.max_iters;
    report.sample_count = static_cast<int>(b);
    for (const auto& tally : tallies) {
        report.correct += tally.correct;
        report.misassigned += tally.misassigned;
        report.discarded += tally.discarded;
        report.unassignable += tally.unassignable;
    }
    return report;
}

namespace {

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_report(std::ostream& os, const MonteCarloReport& report) {
    const auto [pe_lo, pe_hi] = confidence_interval(report.p_e(), report.n);
    const auto [pu_lo, pu_hi] = confidence_interval(report.p_u(), report.n);
    os << "# monte carlo demultiplexing report\n";
    os << "samples " << report.sample_count << '\n';
    os << "n " << report.n << '\n';
    os << "seed " << report.seed << '\n';
    os << "max_iters " << report.max_iters << '\n';
    os << "params pi " << sci(report.params.p_ins) << " pd " << sci(report.params.p_del) << " ps "
       << sci(report.params.p_sub) << " max_ins " << report.params.max_insertions << '\n';
    os << "count correct " << report.correct << '\n';
    os << "count misassigned " << report.misassigned << '\n';
    os << "count discarded " << report.discarded << '\n';
    os << "count unassignable " << report.unassignable << '\n';
    os << "rate p_e " << sci(report.p_e()) << " lower " << sci(pe_lo) << " upper " << sci(pe_hi) << '\n';
    os << "rate p_u " << sci(report.p_u()) << " lower " << sci(pu_lo) << " upper " << sci(pu_hi) << '\n';
}

std::vector<SweepPoint> run_sweep(const BarcodeSet& set, double lo, double hi, int steps, int max_insertions,
                                  uint64_t n, uint64_t seed, const EvalOptions& options) {
    if (steps < 1 || lo > hi) {
        throw std::invalid_argument("need steps >= 1 and lo <= hi");
    }
    std::vector<SweepPoint> points;
    points.reserve(steps);
    for (int p = 0; p < steps; ++p) {
        const double p_mut = steps == 1 ? lo : lo + (hi - lo) * p / (steps - 1);
        IdsParams params;
        params.p_ins = params.p_del = params.p_sub = p_mut / 3.0;
        params.max_insertions = max_insertions;
        const uint64_t point_seed = splitmix64(seed ^ (0x9e3779b97f4a7c15ull + static_cast<uint64_t>(p)));
        points.push_back({p_mut, run_experiment(set, params, n, point_seed, options)});
    }
    return points;
}

void write_sweep(std::ostream& os, std::span<const SweepPoint> points) {
    os << "p_mut\tp_e\tp_e_lower\tp_e_upper\tp_u\tp_u_lower\tp_u_upper\n";
    for (const auto& point : points) {
        const auto& r = point.report;
        const auto [pe_lo, pe_hi] = confidence_interval(r.p_e(), r.n);
        const auto [pu_lo, pu_hi] = confidence_interval(r.p_u(), r.n);
        os << sci(point.p_mut) << '\t' << sci(r.p_e()) << '\t' << sci(pe_lo) << '\t' << sci(pe_hi) << '\t'
           << sci(r.p_u()) << '\t' << sci(pu_lo) << '\t' << sci(pu_hi) << '\n';
    }
}

}  // namespace nswm
