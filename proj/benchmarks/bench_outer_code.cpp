#include <benchmark/benchmark.h>

#include <random>

#include "nswm/outer_code.hpp"

namespace {

void BM_BpDecode(benchmark::State& state) {
    const nswm::FieldTable gf16 = nswm::FieldTable::with_default_poly(16);
    const nswm::OuterCode code = nswm::construct_code(gf16, 6, 2, 7);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<nswm::LikelihoodMatrix> inputs;
    for (int i = 0; i < 32; ++i) {
        auto L = nswm::LikelihoodMatrix::zeros(6, 16);
        for (auto& v : L.values) {
            v = std::pow(unit(rng), 4.0);
        }
        inputs.push_back(std::move(L));
    }
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nswm::bp_decode(code, inputs[i++ % inputs.size()], 10));
    }
}
BENCHMARK(BM_BpDecode);

void BM_Encode(benchmark::State& state) {
    const nswm::FieldTable gf16 = nswm::FieldTable::with_default_poly(16);
    const nswm::OuterCode code = nswm::construct_code(gf16, 24, 4, 7);
    uint64_t index = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(code.encode(code.message_from_index(index++ % 65536)));
    }
}
BENCHMARK(BM_Encode);

}  // namespace
