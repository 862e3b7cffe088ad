#pragma once

#include <cstdint>

namespace refgeo {

// SplitMix64 stream. Every random draw in this project goes through this
// generator so that corpora are reproducible bit-for-bit from a seed on any
// platform (no std::*_distribution, whose output is implementation-defined).
//
// next():       x += 0x9E3779B97F4A7C15; z = x; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
//               z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31;
// next_below(n): ((unsigned __int128)next() * n) >> 64   (Lemire reduction)
// next_double(): (next() >> 11) * 2^-53                  (uniform in [0,1))
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_double() < p; }
};

}  // namespace refgeo
