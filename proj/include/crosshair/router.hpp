#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "crosshair/error.hpp"
#include "crosshair/grid.hpp"
#include "crosshair/noise.hpp"
#include "crosshair/zoo.hpp"

namespace crosshair {

// A client query through the cross-hair interface. An absent accuracy spec
// means 0.
struct QuerySpec {
  std::optional<double> acc_req;
  double lat_req = std::numeric_limits<double>::infinity();
  std::uint64_t input = 0;

  double accuracy_or_default() const { return acc_req.value_or(0.0); }

  void validate() const {
    if (!(lat_req > 0.0)) throw OutOfRange("lat_req must be positive");
    if (acc_req && !(*acc_req >= 0.0 && *acc_req <= 1.0)) throw OutOfRange("acc_req must lie in [0, 1]");
  }

  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

struct DefenseConfig {
  bool enabled = false;
  double epsilon = 0.0;
  double delta_acc = 1.0;
  double delta_lat = 0.0;

  void validate() const {
    if (!enabled) return;
    if (!(epsilon > 0.0)) throw ValidationError("defense epsilon must be positive");
    if (!(delta_acc > 0.0)) throw ValidationError("defense accuracy sensitivity must be positive");
    if (!(delta_lat > 0.0)) throw ValidationError("defense latency sensitivity must be positive");
  }

  LaplaceParams accuracy_noise() const { return {delta_acc / epsilon}; }
  LaplaceParams latency_noise() const { return {delta_lat / epsilon}; }
};

struct Sensitivities {
  double delta_acc;
  double delta_lat;
};

// Accuracy sensitivity is the full [0, 1] range; latency sensitivity is the
// latency span of the frontier.
inline Sensitivities compute_sensitivities(const ParetoFrontier& frontier) {
  if (frontier.empty()) throw EmptyFrontier("sensitivities need a non-empty frontier");
  const auto& e = frontier.entries();
  return {1.0, e.back().latency_ms - e.front().latency_ms};
}

inline DefenseConfig make_defense(const ParetoFrontier& frontier, double epsilon) {
  const auto s = compute_sensitivities(frontier);
  DefenseConfig d{true, epsilon, s.delta_acc, s.delta_lat};
  d.validate();
  return d;
}

// Ground truth is a hash of (dataset seed, input id). A model answers
// correctly with probability equal to its accuracy, deterministically per
// (model, input); wrong answers are uniform over the other classes.
class SimulatedOracle {
 public:
  explicit SimulatedOracle(std::uint64_t dataset_seed = 0) : dataset_seed_(dataset_seed) {}

  int ground_truth(std::uint64_t input, int num_classes) const {
    return static_cast<int>(derive_seed(dataset_seed_, input) % static_cast<std::uint64_t>(num_classes));
  }

  int label(const ModelProfile& model, std::uint64_t input) const {
    const int k = model.num_classes;
    const int truth = ground_truth(input, k);
    const std::uint64_t h = derive_seed(dataset_seed_, fnv1a(model.id), input);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (u < model.accuracy) return truth;
    const auto offset = 1 + static_cast<int>(mix64(h) % static_cast<std::uint64_t>(k - 1));
    return (truth + offset) % k;
  }

 private:
  static std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t dataset_seed_;
};

enum class ServeStatus { Served, InfeasibleSetError };

struct ServeOutcome {
  ServeStatus status = ServeStatus::InfeasibleSetError;
  std::optional<std::string> served_model_id;
  std::optional<std::size_t> served_index;  // position in the frontier
  std::optional<int> label;
  bool spec_satisfied = false;
  // Specs actually used for selection. Server-side telemetry only.
  double noisy_acc = 0.0;
  double noisy_lat = 0.0;

  bool served() const { return status == ServeStatus::Served; }
};

// Specs resolved onto the frontier's grid. Accuracy rounds up and latency
// rounds down so a model chosen on the grid always meets the real-valued
// request.
struct GridQuery {
  grid::Ticks min_acc;
  grid::Ticks max_lat;
};

inline GridQuery resolve_on_grid(const QuerySpec& q, const GranularityConfig& g) {
  return {grid::ceil_ticks(q.accuracy_or_default(), g.acc_g), grid::floor_ticks(q.lat_req, g.lat_g)};
}

namespace detail {

template <class Rng>
ServeOutcome pick_and_label(const ParetoFrontier& frontier, std::pair<std::size_t, std::size_t> range,
                            std::uint64_t input, Rng& rng, const SimulatedOracle& oracle) {
  ServeOutcome out;
  if (range.first >= range.second) return out;
  std::uniform_int_distribution<std::size_t> pick(range.first, range.second - 1);
  const std::size_t idx = pick(rng);
  const auto& m = frontier[idx];
  out.status = ServeStatus::Served;
  out.served_index = idx;
  out.served_model_id = m.id;
  out.label = oracle.label(m, input);
  return out;
}

}  // namespace detail

// Undefended routing: uniform choice over the feasibility set.
template <class Rng>
ServeOutcome serve_plain(const ParetoFrontier& frontier, const QuerySpec& q, Rng& rng,
                         const SimulatedOracle& oracle = SimulatedOracle()) {
  const auto gq = resolve_on_grid(q, frontier.granularity());
  auto out = detail::pick_and_label(frontier, frontier.grid_range(gq.min_acc, gq.max_lat), q.input, rng, oracle);
  out.spec_satisfied = out.served();
  out.noisy_acc = q.accuracy_or_default();
  out.noisy_lat = q.lat_req;
  return out;
}

struct DefenseNoise {
  double acc = 0.0;
  double lat = 0.0;
};

inline DefenseNoise draw_defense_noise(NoiseSource& src, const DefenseConfig& d) {
  DefenseNoise y;
  y.acc = sample(src, d.accuracy_noise());
  y.lat = sample(src, d.latency_noise());
  return y;
}

// Defended routing with an explicit noise realization. The perturbed specs
// are resolved to the nearest grid point; the original latency spec is kept
// as a hard cap so latency is never violated.
template <class Rng>
ServeOutcome serve_defended(const ParetoFrontier& frontier, const QuerySpec& q, const DefenseNoise& noise,
                            Rng& rng, const SimulatedOracle& oracle = SimulatedOracle()) {
  const auto& g = frontier.granularity();
  const auto gq = resolve_on_grid(q, g);
  const double noisy_acc = q.accuracy_or_default() + noise.acc;
  const double noisy_lat = q.lat_req + noise.lat;

  const auto noisy_acc_ticks = grid::value(gq.min_acc, g.acc_g) + noise.acc;
  const grid::Ticks min_acc = grid::nearest_ticks(noisy_acc_ticks, g.acc_g);
  grid::Ticks max_lat = gq.max_lat;
  if (gq.max_lat != grid::kUnbounded) {
    const grid::Ticks noisy = grid::nearest_ticks(grid::value(gq.max_lat, g.lat_g) + noise.lat, g.lat_g);
    max_lat = std::min(noisy, gq.max_lat);
  }

  auto out = detail::pick_and_label(frontier, frontier.grid_range(min_acc, max_lat), q.input, rng, oracle);
  out.spec_satisfied = out.served() && frontier[*out.served_index].accuracy >= q.accuracy_or_default();
  out.noisy_acc = noisy_acc;
  out.noisy_lat = noisy_lat;
  return out;
}

enum class Phase { Fingerprinting, Labeling };

struct ServeRecord {
  QuerySpec query;
  ServeOutcome outcome;
  Phase phase = Phase::Labeling;
};

// Append-only; one record per received query.
class ServeLog {
 public:
  void append(ServeRecord r) { records_.push_back(std::move(r)); }
  const std::vector<ServeRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<ServeRecord> records_;
};

// Fraction of received queries that were served by a model meeting the
// original specs. Infeasible-set errors count against it.
inline double goodput(const ServeLog& log) {
  if (log.empty()) throw EmptyLog("goodput of an empty log");
  std::size_t good = 0;
  for (const auto& r : log.records()) {
    if (r.outcome.served() && r.outcome.spec_satisfied) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(log.size());
}

inline double goodput(const ServeLog& log, Phase phase) {
  std::size_t good = 0;
  std::size_t total = 0;
  for (const auto& r : log.records()) {
    if (r.phase != phase) continue;
    ++total;
    if (r.outcome.served() && r.outcome.spec_satisfied) ++good;
  }
  if (total == 0) throw EmptyLog("goodput of an empty log");
  return static_cast<double>(good) / static_cast<double>(total);
}

// Aggregate counters exposed to experiment harnesses.
struct TelemetrySummary {
  std::uint64_t received = 0;
  std::uint64_t served = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t failed = 0;
  std::map<std::string, std::uint64_t> triggers;

  // Counts accumulated since `earlier`.
  TelemetrySummary since(const TelemetrySummary& earlier) const {
    TelemetrySummary d;
    d.received = received - earlier.received;
    d.served = served - earlier.served;
    d.satisfied = satisfied - earlier.satisfied;
    d.failed = failed - earlier.failed;
    for (const auto& [id, n] : triggers) {
      const auto it = earlier.triggers.find(id);
      const std::uint64_t before = it == earlier.triggers.end() ? 0 : it->second;
      if (n > before) d.triggers[id] = n - before;
    }
    return d;
  }

  friend bool operator==(const TelemetrySummary&, const TelemetrySummary&) = default;
};

struct RouterOptions {
  DefenseConfig defense;
  std::uint64_t seed = 0;
  std::uint64_t dataset_seed = 0;
  bool keep_log = true;
};

// The serving engine. Thread-safe: queries are serialized, giving the log a
// total order. Replays are deterministic when one query is in flight.
class Router {
 public:
  Router(ParetoFrontier frontier, RouterOptions opts)
      : frontier_(std::move(frontier)),
        opts_(opts),
        oracle_(opts.dataset_seed),
        select_rng_(derive_seed(opts.seed, 0x5e1ec7ULL)) {
    opts_.defense.validate();
    for (const auto& m : frontier_.entries()) totals_.triggers[m.id] = 0;
  }

  const ParetoFrontier& frontier() const { return frontier_; }
  const DefenseConfig& defense() const { return opts_.defense; }
  std::uint64_t seed() const { return opts_.seed; }

  ServeOutcome serve(const QuerySpec& q) {
    q.validate();
    std::lock_guard lock(mu_);
    ServeOutcome out;
    if (opts_.defense.enabled) {
      NoiseSource noise(derive_seed(opts_.seed, 0x401feULL), counter_);
      out = serve_defended(frontier_, q, draw_defense_noise(noise, opts_.defense), select_rng_, oracle_);
    } else {
      out = serve_plain(frontier_, q, select_rng_, oracle_);
    }
    ++counter_;
    ++totals_.received;
    if (out.served()) {
      ++totals_.served;
      ++totals_.triggers[*out.served_model_id];
      if (out.spec_satisfied) ++totals_.satisfied;
    } else {
      ++totals_.failed;
    }
    if (opts_.keep_log) log_.append({q, out, phase_});
    return out;
  }

  void set_phase(Phase p) {
    std::lock_guard lock(mu_);
    phase_ = p;
  }

  TelemetrySummary telemetry() const {
    std::lock_guard lock(mu_);
    return totals_;
  }

  ServeLog log() const {
    std::lock_guard lock(mu_);
    return log_;
  }

  std::uint64_t received() const {
    std::lock_guard lock(mu_);
    return counter_;
  }

 private:
  ParetoFrontier frontier_;
  RouterOptions opts_;
  SimulatedOracle oracle_;

  mutable std::mutex mu_;
  std::mt19937_64 select_rng_;
  std::uint64_t counter_ = 0;
  Phase phase_ = Phase::Labeling;
  ServeLog log_;
  TelemetrySummary totals_;
};

}  // namespace crosshair
