#pragma once

#include <cstdint>
#include <random>

namespace voltext {

using Rng = std::mt19937_64;

// Independent stream for (master seed, stream id); used wherever work is
// split across OpenMP threads so results do not depend on scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng stream_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(splitmix64(master ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

// Uniform double in [0,1) with 53 random bits; std::uniform_real_distribution
// is implementation-defined, this is not.
inline double uniform01(Rng& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace voltext
