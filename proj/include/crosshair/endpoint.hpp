#pragma once

#include <concepts>
#include <cstdint>
#include <optional>

#include "crosshair/error.hpp"
#include "crosshair/router.hpp"

namespace crosshair {

// What an attacker can do against the cross-hair interface: submit
// (accuracy, latency, input) and observe either a label or the infeasible
// set error (nullopt). Transport failures are exceptions.
template <class E>
concept QueryEndpoint = requires(E& ep, std::optional<double> acc, double lat, std::uint64_t input) {
  { ep.infer(acc, lat, input) } -> std::same_as<std::optional<int>>;
};

// Experiment-mode server counters. nullopt when the server does not expose
// them.
template <class E>
concept TelemetrySource = requires(E& ep) {
  { ep.telemetry() } -> std::same_as<std::optional<TelemetrySummary>>;
};

// Counts every invocation and optionally refuses to exceed a budget.
template <QueryEndpoint E>
class CountingEndpoint {
 public:
  explicit CountingEndpoint(E& inner, std::optional<std::uint64_t> budget = std::nullopt)
      : inner_(inner), budget_(budget) {}

  std::optional<int> infer(std::optional<double> acc, double lat, std::uint64_t input) {
    if (budget_ && count_ >= *budget_) throw BudgetExhausted("query budget exhausted");
    ++count_;
    return inner_.infer(acc, lat, input);
  }

  std::optional<TelemetrySummary> telemetry()
    requires TelemetrySource<E>
  {
    return inner_.telemetry();
  }

  std::uint64_t count() const { return count_; }
  std::optional<std::uint64_t> remaining() const {
    if (!budget_) return std::nullopt;
    return *budget_ - count_;
  }

 private:
  E& inner_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t count_ = 0;
};

// In-process endpoint bound to a router.
class LocalEndpoint {
 public:
  explicit LocalEndpoint(Router& router) : router_(router) {}

  std::optional<int> infer(std::optional<double> acc, double lat, std::uint64_t input) {
    const auto out = router_.serve(QuerySpec{acc, lat, input});
    if (!out.served()) return std::nullopt;
    return out.label;
  }

  std::optional<TelemetrySummary> telemetry() { return router_.telemetry(); }

  Router& router() { return router_; }

 private:
  Router& router_;
};

}  // namespace crosshair
