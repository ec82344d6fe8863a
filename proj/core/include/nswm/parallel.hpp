#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace nswm {

inline int effective_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end, worker) over [0, n) split into contiguous chunks, one
// per worker. Results must be merged per worker by the caller; chunking is
// deterministic only in the sense that item i always gets the same work,
// which is what per-item keyed RNG streams rely on.
template <typename Fn>
void parallel_for(uint64_t n, int threads, Fn&& fn) {
    const int workers = std::min<uint64_t>(std::max(1, threads), n == 0 ? 1 : n);
    if (workers <= 1) {
        fn(uint64_t{0}, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const uint64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const uint64_t begin = chunk * static_cast<uint64_t>(w);
        const uint64_t end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace nswm
