#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "crosshair/error.hpp"

namespace crosshair {

// Resolution at which the serving system distinguishes specs. Values closer
// than one step are indistinguishable; l_up bounds every latency.
struct GranularityConfig {
  double acc_g = 0.001;
  double lat_g = 1.0;
  double l_up = 32.0;

  void validate() const {
    if (!(acc_g > 0.0) || !(lat_g > 0.0) || !(l_up > 0.0)) {
      throw ValidationError("granularity steps and l_up must be positive");
    }
    if (acc_g > 1.0) throw ValidationError("acc_g must not exceed 1");
    if (lat_g > l_up) throw ValidationError("lat_g must not exceed l_up");
  }

  friend bool operator==(const GranularityConfig&, const GranularityConfig&) = default;
};

// Integer tick arithmetic on a granularity grid. All routing comparisons are
// done on ticks so that values parsed from text and values computed as
// ticks * step compare equal.
namespace grid {

using Ticks = std::int64_t;

// Stand-in for an unbounded latency spec.
inline constexpr Ticks kUnbounded = std::numeric_limits<Ticks>::max() / 4;

inline constexpr double kTolerance = 1e-9;

inline Ticks floor_ticks(double x, double step) {
  if (!std::isfinite(x)) return x > 0 ? kUnbounded : -kUnbounded;
  return static_cast<Ticks>(std::floor(x / step + kTolerance));
}

inline Ticks ceil_ticks(double x, double step) {
  if (!std::isfinite(x)) return x > 0 ? kUnbounded : -kUnbounded;
  return static_cast<Ticks>(std::ceil(x / step - kTolerance));
}

inline Ticks nearest_ticks(double x, double step) {
  if (!std::isfinite(x)) return x > 0 ? kUnbounded : -kUnbounded;
  return static_cast<Ticks>(std::llround(x / step));
}

// The real value of a tick count. When 1/step is an integer the division
// form yields the correctly rounded decimal (800 / 1000.0 == 0.8), which
// keeps wire text short and round-trippable.
inline double value(Ticks ticks, double step) {
  const double inv = 1.0 / step;
  const double rounded = std::round(inv);
  if (rounded >= 1.0 && std::abs(inv - rounded) <= kTolerance * rounded) {
    return static_cast<double>(ticks) / rounded;
  }
  return static_cast<double>(ticks) * step;
}

inline double snap_down(double x, double step) { return value(floor_ticks(x, step), step); }

inline double snap_nearest(double x, double step) { return value(nearest_ticks(x, step), step); }

inline bool on_grid(double x, double step) {
  return std::abs(x / step - std::round(x / step)) <= 1e-6;
}

}  // namespace grid
}  // namespace crosshair
