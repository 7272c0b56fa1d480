#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "crosshair/error.hpp"
#include "crosshair/grid.hpp"

namespace crosshair {

// One registered model: identity plus its profiled operating point.
struct ModelProfile {
  std::string id;
  std::string name;
  double accuracy = 0.0;   // fraction in [0, 1]
  double latency_ms = 0.0; // strictly positive
  int num_classes = 10;

  void validate() const {
    if (id.empty()) throw ValidationError("model id must not be empty");
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
      throw ValidationError("model '" + id + "': accuracy must lie in [0, 1]");
    }
    if (!(latency_ms > 0.0)) throw ValidationError("model '" + id + "': latency must be positive");
    if (num_classes < 2) throw ValidationError("model '" + id + "': num_classes must be at least 2");
  }

  friend bool operator==(const ModelProfile&, const ModelProfile&) = default;
};

// Strict two-way dominance: more accurate and faster.
inline bool dominates(const ModelProfile& a, const ModelProfile& b) {
  return a.accuracy > b.accuracy && a.latency_ms < b.latency_ms;
}

// The dominance-maximal subset of a zoo, sorted by latency. Both accuracy and
// latency ascend strictly along the order, consecutive entries are more than
// one granularity step apart, and every latency is within l_up.
//
// Only build_frontier() constructs a non-empty instance, so holding a
// ParetoFrontier means the invariants hold. Immutable after construction.
class ParetoFrontier {
 public:
  ParetoFrontier() = default;

  const std::vector<ModelProfile>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const ModelProfile& operator[](std::size_t i) const { return entries_[i]; }
  const GranularityConfig& granularity() const { return granularity_; }

  // Largest accuracy tick each entry satisfies and smallest latency tick it
  // fits under. Both sequences ascend strictly.
  std::span<const grid::Ticks> accuracy_ticks() const { return acc_ticks_; }
  std::span<const grid::Ticks> latency_ticks() const { return lat_ticks_; }

  // Entries satisfying acc_ticks >= min_acc and lat_ticks <= max_lat form
  // the contiguous index range [first, second).
  std::pair<std::size_t, std::size_t> grid_range(grid::Ticks min_acc, grid::Ticks max_lat) const {
    const auto lo = std::lower_bound(acc_ticks_.begin(), acc_ticks_.end(), min_acc) - acc_ticks_.begin();
    const auto hi = std::upper_bound(lat_ticks_.begin(), lat_ticks_.end(), max_lat) - lat_ticks_.begin();
    const auto first = static_cast<std::size_t>(lo);
    const auto last = static_cast<std::size_t>(hi);
    return {first, std::max(first, last)};
  }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].id == id) return i;
    }
    return entries_.size();
  }

 private:
  friend ParetoFrontier build_frontier(std::vector<ModelProfile> models, const GranularityConfig& g);

  ParetoFrontier(std::vector<ModelProfile> entries, const GranularityConfig& g)
      : entries_(std::move(entries)), granularity_(g) {
    acc_ticks_.reserve(entries_.size());
    lat_ticks_.reserve(entries_.size());
    for (const auto& m : entries_) {
      acc_ticks_.push_back(grid::floor_ticks(m.accuracy, g.acc_g));
      lat_ticks_.push_back(grid::ceil_ticks(m.latency_ms, g.lat_g));
    }
  }

  std::vector<ModelProfile> entries_;
  GranularityConfig granularity_{};
  std::vector<grid::Ticks> acc_ticks_;
  std::vector<grid::Ticks> lat_ticks_;
};

// Computes the Pareto frontier of `models` and checks it against the
// granularity-and-boundary assumption. Identical (accuracy, latency) points
// collapse to the one with the smaller id.
inline ParetoFrontier build_frontier(std::vector<ModelProfile> models, const GranularityConfig& g) {
  g.validate();
  {
    std::unordered_set<std::string> ids;
    for (const auto& m : models) {
      m.validate();
      if (!ids.insert(m.id).second) throw ValidationError("duplicate model id '" + m.id + "'");
    }
  }

  std::sort(models.begin(), models.end(), [](const ModelProfile& a, const ModelProfile& b) {
    if (a.latency_ms != b.latency_ms) return a.latency_ms < b.latency_ms;
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.id < b.id;
  });

  // Sweep by latency groups: a model is dominated iff some strictly faster
  // model is strictly more accurate.
  std::vector<ModelProfile> kept;
  double best_faster = -1.0;
  for (std::size_t i = 0; i < models.size();) {
    std::size_t j = i;
    double group_best = -1.0;
    while (j < models.size() && models[j].latency_ms == models[i].latency_ms) {
      const auto& m = models[j];
      const bool duplicate = !kept.empty() && kept.back().latency_ms == m.latency_ms &&
                             kept.back().accuracy == m.accuracy;
      if (!(best_faster > m.accuracy) && !duplicate) kept.push_back(m);
      group_best = std::max(group_best, m.accuracy);
      ++j;
    }
    best_faster = std::max(best_faster, group_best);
    i = j;
  }
  std::sort(kept.begin(), kept.end(), [](const ModelProfile& a, const ModelProfile& b) {
    if (a.latency_ms != b.latency_ms) return a.latency_ms < b.latency_ms;
    return a.accuracy < b.accuracy;
  });

  const double acc_min_gap = g.acc_g * (1.0 + grid::kTolerance);
  const double lat_min_gap = g.lat_g * (1.0 + grid::kTolerance);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i].latency_ms > g.l_up * (1.0 + grid::kTolerance)) {
      throw GranularityViolation("model '" + kept[i].id + "' latency exceeds l_up");
    }
    if (i == 0) continue;
    const auto& lo = kept[i - 1];
    const auto& hi = kept[i];
    if (!(hi.accuracy - lo.accuracy > acc_min_gap)) {
      throw GranularityViolation("frontier models '" + lo.id + "' and '" + hi.id +
                                 "' are within acc_g in accuracy");
    }
    if (!(hi.latency_ms - lo.latency_ms > lat_min_gap)) {
      throw GranularityViolation("frontier models '" + lo.id + "' and '" + hi.id +
                                 "' are within lat_g in latency");
    }
  }
  return ParetoFrontier(std::move(kept), g);
}

struct FeasibilitySet {
  std::vector<ModelProfile> members;

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
};

// Frontier members meeting both specs, compared as real numbers.
inline FeasibilitySet feasibility_set(const ParetoFrontier& frontier, double acc_req, double lat_req) {
  FeasibilitySet out;
  for (const auto& m : frontier.entries()) {
    if (m.accuracy >= acc_req && m.latency_ms <= lat_req) out.members.push_back(m);
  }
  return out;
}

}  // namespace crosshair
