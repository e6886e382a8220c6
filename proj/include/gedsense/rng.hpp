#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>

#include <boost/random/normal_distribution.hpp>

namespace gedsense {

/// Engine used for every Monte Carlo substream.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of substream (stream, index) of a run seeded with `seed`. Trials draw
/// from their own substream, so results do not depend on scheduling.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return Engine(substream_seed(seed, stream, index));
}

/// Uniform on (0, 1], 53-bit resolution, identical on every platform.
inline double uniform_open0(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Circularly symmetric complex Gaussian with E|z|^2 = variance.
inline std::complex<double> complex_gaussian(Engine& eng, double variance) {
  boost::random::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  const double re = normal(eng);
  return {re, normal(eng)};
}

/// Adds i.i.d. complex Gaussian samples of the given variance to `out`.
inline void add_complex_gaussian(std::span<std::complex<double>> out, Engine& eng, double variance) {
  boost::random::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  for (auto& v : out) {
    const double re = normal(eng);
    v += std::complex<double>(re, normal(eng));
  }
}

}  // namespace gedsense
