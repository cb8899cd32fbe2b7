#pragma once

// Portable random streams.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The std:: distribution adaptors are not (their algorithms are
// implementation-defined), so every transform used by the solvers lives here:
//
//   uniform()   (x >> 11) * 2^-53, a double in [0, 1)
//   below(m)    unbiased integer in [0, m) by rejection on the 64-bit output
//   normal()    Box-Muller, cosine branch only: two uniforms per variate,
//               u1 taken as 1 - uniform() so it lies in (0, 1]
//
// Identical seeds give identical streams on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace csg {

/// SplitMix64 finalizer; used to derive independent per-run seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Largest multiple of bound that fits; reject draws above it.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace csg
