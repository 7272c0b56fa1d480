#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "crosshair/error.hpp"

namespace crosshair {

// SplitMix64 finalizer. Used to derive independent seeds and as the
// counter-based generator behind NoiseSource.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t base) { return mix64(base); }

template <class... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t next, Rest... rest) {
  return derive_seed(mix64(base) ^ mix64(next + 0x632be59bd9b4e019ULL), static_cast<std::uint64_t>(rest)...);
}

// Reproducible uniform stream keyed by (seed, stream_id). Draw k of a given
// stream is a pure function of (seed, stream_id, k). Single owner.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), state_(derive_seed(seed, stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t draws() const { return draws_; }

  std::uint64_t next_u64() {
    ++draws_;
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0, 1): the 53-bit lattice shifted by half
  // a step never produces 0 or 1.
  double uniform_open() {
    const auto bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

struct LaplaceParams {
  double scale = 1.0;

  void validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("Laplace scale must be positive and finite");
  }
};

// Quantile of the zero-mean Laplace distribution with the given scale.
inline double laplace_inverse_cdf(double u, double scale) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("Laplace quantile requires u in (0, 1)");
  if (!(scale > 0.0)) throw DomainError("Laplace scale must be positive");
  if (u == 0.5) return 0.0;
  // 1 - u is exact for u >= 0.5, so both tails keep full precision.
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

inline double sample(NoiseSource& src, const LaplaceParams& params) {
  return laplace_inverse_cdf(src.uniform_open(), params.scale);
}

}  // namespace crosshair
