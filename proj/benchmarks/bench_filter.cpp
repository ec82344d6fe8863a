#include <benchmark/benchmark.h>

#include <random>

#include "nswm/chem_filter.hpp"

namespace {

void BM_FilterPass(benchmark::State& state) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> pick(0, 3);
    static constexpr char kBases[] = "ACGT";
    std::vector<std::string> seqs(state.range(0));
    for (auto& s : seqs) {
        s.resize(24);
        for (auto& c : s) {
            c = kBases[pick(rng)];
        }
    }
    const nswm::ChemFilter filter(nswm::FilterThresholds{},
                                  nswm::AdapterContext{"TCGTAGAGTGAT", "ATGGCAGAATGTGATAGTCGGTTGTGGAGC"});
    for (auto _ : state) {
        benchmark::DoNotOptimize(filter.count_survivors(seqs));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterPass)->Arg(256)->Arg(4096);

}  // namespace
