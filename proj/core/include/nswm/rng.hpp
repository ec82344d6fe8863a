#pragma once

#include <cstdint>
#include <random>

namespace nswm {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based stream: the engine for item `index` depends only on
// (seed, index), so work split across any number of workers stays
// reproducible.
inline std::mt19937_64 make_stream(uint64_t seed, uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701ull)));
}

}  // namespace nswm
