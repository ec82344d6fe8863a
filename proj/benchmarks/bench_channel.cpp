#include <benchmark/benchmark.h>

#include "nswm/ids_channel.hpp"
#include "nswm/rng.hpp"

namespace {

void BM_Transmit(benchmark::State& state) {
    const nswm::IdsParams smrt = nswm::IdsParams::smrt_profile();
    std::vector<uint8_t> seq(state.range(0));
    auto rng = nswm::make_stream(1, 0);
    std::uniform_int_distribution<int> base(0, 3);
    for (auto& s : seq) {
        s = static_cast<uint8_t>(base(rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(nswm::transmit(seq, smrt, rng));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Transmit)->Arg(130)->Arg(1000);

void BM_EmissionTable(benchmark::State& state) {
    const nswm::IdsParams smrt = nswm::IdsParams::smrt_profile();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nswm::EmissionTable(smrt));
    }
}
BENCHMARK(BM_EmissionTable);

}  // namespace
