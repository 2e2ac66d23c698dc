#pragma once

#include <cstdint>
#include <random>

namespace mns {

// splitmix64 step; used both as a mixer and to expand seeds
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2a79fb9357dULL;
    return z ^ (z >> 31);
}

// Disjoint, order-independent stream id for one (seed, N, replication) job.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t n,
                                   std::uint64_t rep) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= n * 0x9ddfea08eb382d69ULL;
    h ^= splitmix64(s);
    s ^= rep + 0x165667b19e3779f9ULL;
    h ^= splitmix64(s);
    return h;
}

inline std::mt19937_64 make_engine(std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x6d6e73u};
    return std::mt19937_64(seq);
}

}  // namespace mns
