#pragma once

#include <cstdint>

namespace stochnewton {

// Counter-based generator: every output word is a pure function of
// (seed, run_index, salt, position, dim).  No hidden state means replaying
// a stream gives identical draws and parallel workers can consume disjoint
// run indices without coordination.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
    // SplitMix64 finalizer (Steele, Lea, Flood).
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t word(std::uint64_t seed, std::uint64_t run_index,
                          std::uint64_t salt, std::uint64_t position,
                          std::uint64_t dim) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = mix64(h ^ run_index);
    h = mix64(h ^ (salt * 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ position);
    h = mix64(h ^ (dim * 0xd1b54a32d192ed03ULL));
    return h;
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t run_index,
                        std::uint64_t salt, std::uint64_t position,
                        std::uint64_t dim) {
    return static_cast<double>(word(seed, run_index, salt, position, dim) >> 11) *
           0x1.0p-53;
}

}  // namespace rng
}  // namespace stochnewton
