#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crosshair/endpoint.hpp"
#include "crosshair/grid.hpp"

namespace crosshair {

struct FrontierRow {
  double accuracy = 0.0;
  double latency_ms = 0.0;

  friend bool operator==(const FrontierRow&, const FrontierRow&) = default;
};

// The attacker's recovered frontier, in discovery order (most accurate
// first).
struct FrontierEstimate {
  std::vector<FrontierRow> rows;
  std::uint64_t queries_spent = 0;

  // True when rows strictly decrease in both coordinates, which always holds
  // against an undefended server.
  bool monotone() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (!(rows[i].accuracy < rows[i - 1].accuracy) || !(rows[i].latency_ms < rows[i - 1].latency_ms)) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const FrontierEstimate&, const FrontierEstimate&) = default;
};

struct FingerprintOptions {
  // Bound each latency search by the previous model's latency instead of the
  // global l_up. Off by default.
  bool tight_latency_bound = false;
  // Payload for every probe; the returned labels are discarded.
  std::uint64_t probe_input = 0;
};

namespace detail {

// Binary search over accuracy ticks [0, acc_up]; returns the largest tick
// served under lat_up, or -1 when nothing is.
template <QueryEndpoint E>
grid::Ticks find_max_acc_ticks(E& ep, grid::Ticks acc_up, grid::Ticks lat_up, const GranularityConfig& g,
                               std::uint64_t input) {
  // A non-positive latency spec cannot be served, and cannot be sent.
  if (lat_up < 1) return -1;
  grid::Ticks low = 0;
  grid::Ticks hi = acc_up + 1;
  const double lat = grid::value(lat_up, g.lat_g);
  while (hi - low >= 1) {
    const grid::Ticks mid = low + (hi - low) / 2;
    if (ep.infer(grid::value(mid, g.acc_g), lat, input)) {
      low = mid + 1;
    } else {
      hi = mid;
    }
  }
  return low - 1;
}

// Binary search over latency ticks [0, lat_hi); returns the smallest tick at
// which `acc` is served (lat_hi when none is).
template <QueryEndpoint E>
grid::Ticks find_lat_ticks(E& ep, grid::Ticks acc, grid::Ticks lat_hi, const GranularityConfig& g,
                           std::uint64_t input) {
  grid::Ticks low = 0;
  grid::Ticks hi = lat_hi;
  const double acc_value = grid::value(acc, g.acc_g);
  while (hi - low >= 1) {
    const grid::Ticks mid = low + (hi - low) / 2;
    const bool served = mid >= 1 && ep.infer(acc_value, grid::value(mid, g.lat_g), input).has_value();
    if (served) {
      hi = mid;
    } else {
      low = mid + 1;
    }
  }
  return low;
}

}  // namespace detail

// Highest accuracy on the grid that is served with latency spec lat_up.
// Returns a value below acc_g when nothing is served.
template <QueryEndpoint E>
double find_max_acc(E& ep, double acc_up, double lat_up, const GranularityConfig& g,
                    std::uint64_t input = 0) {
  const auto ticks = detail::find_max_acc_ticks(ep, grid::floor_ticks(acc_up, g.acc_g),
                                                grid::floor_ticks(lat_up, g.lat_g), g, input);
  return grid::value(ticks, g.acc_g);
}

// Lowest latency on the grid at which accuracy `acc` is served.
template <QueryEndpoint E>
double find_lat(E& ep, double acc, const GranularityConfig& g, std::uint64_t input = 0) {
  const auto l_up = grid::floor_ticks(g.l_up, g.lat_g);
  const auto ticks = detail::find_lat_ticks(ep, grid::nearest_ticks(acc, g.acc_g), l_up + 1, g, input);
  return grid::value(ticks, g.lat_g);
}

// Recovers every (accuracy, latency) pair on the frontier by alternating an
// accuracy search under the current latency ceiling with a latency search at
// the found accuracy, then shrinking both ceilings below the found model.
template <QueryEndpoint E>
FrontierEstimate fingerprint(E& ep, const GranularityConfig& g, const FingerprintOptions& opts = {}) {
  g.validate();
  CountingEndpoint<E> counted(ep);
  FrontierEstimate est;

  const grid::Ticks l_up = grid::floor_ticks(g.l_up, g.lat_g);
  grid::Ticks acc_up = grid::floor_ticks(1.0, g.acc_g);
  grid::Ticks lat_up = l_up;
  while (acc_up >= 1) {
    const grid::Ticks acc = detail::find_max_acc_ticks(counted, acc_up, lat_up, g, opts.probe_input);
    if (acc < 1) break;
    const grid::Ticks lat_hi = opts.tight_latency_bound ? lat_up + 1 : l_up + 1;
    const grid::Ticks lat = detail::find_lat_ticks(counted, acc, lat_hi, g, opts.probe_input);
    est.rows.push_back({grid::value(acc, g.acc_g), grid::value(lat, g.lat_g)});
    acc_up = acc - 1;
    lat_up = lat - 1;
  }
  est.queries_spent = counted.count();
  return est;
}

}  // namespace crosshair
