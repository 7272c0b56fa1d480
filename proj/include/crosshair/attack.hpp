#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crosshair/endpoint.hpp"
#include "crosshair/error.hpp"
#include "crosshair/fingerprint.hpp"
#include "crosshair/zoo.hpp"

namespace crosshair {

struct AttackBudget {
  double latency_budget = 0.0;  // L, ms
  std::uint64_t query_budget = 4000;

  void validate() const {
    if (!(latency_budget > 0.0)) throw ValidationError("latency budget must be positive");
    if (query_budget < 1) throw ValidationError("query budget must be at least 1");
  }
};

// Specs that target the victim: the estimate row with the largest latency
// not above the latency budget.
struct VictimSpec {
  double acc_spec = 0.0;
  double lat_spec = 0.0;

  friend bool operator==(const VictimSpec&, const VictimSpec&) = default;
};

inline VictimSpec select_victim(const FrontierEstimate& est, const AttackBudget& budget) {
  const FrontierRow* best = nullptr;
  for (const auto& row : est.rows) {
    if (row.latency_ms <= budget.latency_budget && (!best || row.latency_ms > best->latency_ms)) best = &row;
  }
  if (!best) throw NoFeasibleVictim("no fingerprinted model fits the latency budget");
  return {best->accuracy, best->latency_ms};
}

enum class CampaignMode { Fingerprint, Naive };

struct LabeledExample {
  std::uint64_t input = 0;
  int label = 0;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

struct CampaignResult {
  CampaignMode mode = CampaignMode::Fingerprint;
  std::vector<LabeledExample> labeled_examples;
  // Which model answered each labeling query, from server telemetry. Empty
  // when the server exposes none.
  std::map<std::string, std::uint64_t> trigger_histogram;
  std::uint64_t queries_fingerprinting = 0;
  std::uint64_t queries_labeling = 0;
  std::uint64_t queries_successful = 0;
  std::uint64_t queries_failed = 0;
  FrontierEstimate estimate;
  std::optional<VictimSpec> victim;
  // Server counters restricted to the labeling phase.
  std::optional<TelemetrySummary> labeling_telemetry;

  // Normalized trigger histogram.
  std::map<std::string, double> trigger_pmf() const {
    std::map<std::string, double> pmf;
    std::uint64_t total = 0;
    for (const auto& [id, n] : trigger_histogram) total += n;
    if (total == 0) return pmf;
    for (const auto& [id, n] : trigger_histogram) {
      if (n > 0) pmf[id] = static_cast<double>(n) / static_cast<double>(total);
    }
    return pmf;
  }

  // Goodput over the labeling phase; nullopt without telemetry or queries.
  std::optional<double> labeling_goodput() const {
    if (!labeling_telemetry || labeling_telemetry->received == 0) return std::nullopt;
    return static_cast<double>(labeling_telemetry->satisfied) / static_cast<double>(labeling_telemetry->received);
  }

  friend bool operator==(const CampaignResult&, const CampaignResult&) = default;
};

// First input id used for labeling queries; fingerprint probes use 0.
inline constexpr std::uint64_t kFirstLabelingInput = 1;

template <QueryEndpoint E>
CampaignResult run_campaign(E& ep, const AttackBudget& budget, const GranularityConfig& g, CampaignMode mode,
                            const FingerprintOptions& fp_opts = {}) {
  budget.validate();
  CountingEndpoint<E> counted(ep, budget.query_budget);
  CampaignResult result;
  result.mode = mode;

  std::optional<double> acc_spec;
  double lat_spec = budget.latency_budget;
  if (mode == CampaignMode::Fingerprint) {
    result.estimate = fingerprint(counted, g, fp_opts);
    result.queries_fingerprinting = result.estimate.queries_spent;
    if (result.queries_fingerprinting >= budget.query_budget) {
      throw BudgetExhausted("fingerprinting consumed the whole query budget");
    }
    result.victim = select_victim(result.estimate, budget);
    acc_spec = result.victim->acc_spec;
    lat_spec = result.victim->lat_spec;
  }

  std::optional<TelemetrySummary> before;
  if constexpr (TelemetrySource<E>) before = ep.telemetry();

  const std::uint64_t labeling = budget.query_budget - result.queries_fingerprinting;
  result.labeled_examples.reserve(labeling);
  for (std::uint64_t i = 0; i < labeling; ++i) {
    const std::uint64_t input = kFirstLabelingInput + i;
    if (const auto label = counted.infer(acc_spec, lat_spec, input)) {
      result.labeled_examples.push_back({input, *label});
      ++result.queries_successful;
    } else {
      ++result.queries_failed;
    }
  }
  result.queries_labeling = labeling;

  if constexpr (TelemetrySource<E>) {
    const auto after = ep.telemetry();
    if (before && after) {
      result.labeling_telemetry = after->since(*before);
      result.trigger_histogram = result.labeling_telemetry->triggers;
    }
  }
  return result;
}

// Extraction-quality surrogate: the expected accuracy of the collected
// labels, i.e. the trigger-weighted accuracy of the serving models.
inline double expected_label_accuracy(const std::map<std::string, double>& pmf, const ParetoFrontier& frontier) {
  double mass = 0.0;
  double acc = 0.0;
  for (const auto& [id, p] : pmf) {
    const auto idx = frontier.index_of(id);
    if (idx == frontier.size()) throw DomainError("trigger PMF names unknown model '" + id + "'");
    if (p < 0.0) throw DomainError("trigger PMF has a negative mass");
    mass += p;
    acc += p * frontier[idx].accuracy;
  }
  if (std::abs(mass - 1.0) > 1e-9) throw DomainError("trigger PMF must sum to 1");
  return acc;
}

// Probability that two independent k-class classifiers with accuracies a_v
// and a_e agree, when errors are uniform over the wrong classes.
inline double expected_agreement(double a_v, double a_e, int k) {
  if (k < 2) throw DomainError("expected_agreement needs at least 2 classes");
  if (!(a_v >= 0.0 && a_v <= 1.0) || !(a_e >= 0.0 && a_e <= 1.0)) {
    throw DomainError("accuracies must lie in [0, 1]");
  }
  const double miss = (1.0 - a_v) * (1.0 - a_e);
  const double both_right_floor = a_v + a_e - 1.0;
  // Same value as a_v*a_e + miss/(k-1), written as floor plus a nonnegative
  // term so rounding can never push it under a_v + a_e - 1.
  if (both_right_floor >= 0.0) return both_right_floor + miss * k / static_cast<double>(k - 1);
  return a_v * a_e + miss / static_cast<double>(k - 1);
}

}  // namespace crosshair
