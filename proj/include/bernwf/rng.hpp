#pragma once

#include <cstdint>
#include <random>

namespace bernwf {

using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based stream derivation: replica i always gets the same stream
// for a given master seed, independent of how many replicas run in total.
inline Rng make_rng(std::uint64_t seed, std::uint64_t replica = 0) {
    std::uint64_t s = seed;
    std::uint64_t a = detail::splitmix64(s);
    s ^= replica * 0x9e3779b97f4a7c15ULL + 0x1234567897531ULL;
    std::uint64_t b = detail::splitmix64(s);
    Rng rng(a ^ (b + (replica << 1) + 1));
    rng.discard(8);
    return rng;
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Independent sub-seed for a named component, so that two estimators fed
// the same master seed never share replica streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0xa5a55a5adeadbeefULL + tag * 0x9e3779b97f4a7c15ULL);
    return detail::splitmix64(s);
}

}  // namespace bernwf
