#include <benchmark/benchmark.h>

#include <map>

#include "nswm/barcode_set.hpp"
#include "nswm/demux.hpp"
#include "nswm/eval.hpp"
#include "nswm/rng.hpp"

namespace {

const nswm::BarcodeSet& bench_set(int k, int l) {
    static std::map<std::pair<int, int>, nswm::BuildResult> cache;
    auto it = cache.find({k, l});
    if (it == cache.end()) {
        nswm::BuildParams params;
        params.q = 16;
        params.k = k;
        params.u = 4;
        params.l = l;
        params.code_seed = 7;
        params.codebook_seed = 7;
        params.watermark_seed = 7;
        params.watermark_mode = nswm::WatermarkMode::random;
        it = cache.emplace(std::make_pair(k, l), nswm::build_barcode_set(params)).first;
    }
    return it->second.set;
}

// Full per-read pipeline: boundary estimation, forward-backward, BP.
void BM_DemultiplexRead(benchmark::State& state) {
    const auto& set = bench_set(2, static_cast<int>(state.range(0)));
    const nswm::IdsParams smrt = nswm::IdsParams::smrt_profile();
    const nswm::Demultiplexer demux(set, smrt, nswm::DemuxOptions{});
    std::vector<std::vector<uint8_t>> reads;
    for (int i = 0; i < 64; ++i) {
        auto rng = nswm::make_stream(5, i);
        const auto clean = nswm::synth_read_symbols(set, i % set.samples().size(), 64, rng);
        reads.push_back(nswm::transmit(clean, smrt, rng));
    }
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(demux.demultiplex_symbols(reads[i++ % reads.size()]));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DemultiplexRead)->Arg(24)->Arg(48)->Arg(96)->Unit(benchmark::kMicrosecond);

}  // namespace
