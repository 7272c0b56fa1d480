#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crosshair/attack.hpp"
#include "crosshair/endpoint.hpp"
#include "crosshair/error.hpp"
#include "crosshair/fingerprint.hpp"
#include "crosshair/grid.hpp"
#include "crosshair/noise.hpp"
#include "crosshair/router.hpp"
#include "crosshair/zoo.hpp"

namespace crosshair {

// Parameters for a synthetic single-frontier zoo.
struct ZooGenSpec {
  std::size_t n = 12;
  double acc_lo = 0.1;
  double acc_hi = 0.99;
  double lat_lo = 1.0;
  double lat_hi = 100.0;
  GranularityConfig granularity{0.0001, 0.01, 100.0};
  std::uint64_t seed = 0;
  int num_classes = 10;
};

namespace detail {

// n sorted grid ticks from [lo, hi], consecutive ticks at least 2 apart,
// uniform over all such configurations.
inline std::vector<grid::Ticks> separated_ticks(std::size_t n, grid::Ticks lo, grid::Ticks hi, std::mt19937_64& rng) {
  const grid::Ticks span = hi - lo + 1;
  const grid::Ticks slots = span - static_cast<grid::Ticks>(n) + 1;
  if (n == 0) return {};
  if (span < static_cast<grid::Ticks>(2 * n - 1)) throw InfeasibleSpec("range too narrow for the requested zoo size");
  // Floyd's sampling of n distinct values from [0, slots).
  std::set<grid::Ticks> picked;
  for (grid::Ticks j = slots - static_cast<grid::Ticks>(n); j < slots; ++j) {
    const grid::Ticks t = std::uniform_int_distribution<grid::Ticks>(0, j)(rng);
    if (!picked.insert(t).second) picked.insert(j);
  }
  std::vector<grid::Ticks> out;
  out.reserve(n);
  grid::Ticks shift = 0;
  for (const auto t : picked) out.push_back(lo + t + shift++);
  return out;
}

}  // namespace detail

// A zoo whose every model is on the Pareto frontier and on the grid.
inline std::vector<ModelProfile> gen_random_zoo(const ZooGenSpec& spec) {
  const auto& g = spec.granularity;
  g.validate();
  const grid::Ticks acc_lo = std::max<grid::Ticks>(1, grid::ceil_ticks(spec.acc_lo, g.acc_g));
  const grid::Ticks acc_hi = std::min(grid::floor_ticks(spec.acc_hi, g.acc_g), grid::floor_ticks(1.0, g.acc_g));
  const grid::Ticks lat_lo = std::max<grid::Ticks>(1, grid::ceil_ticks(spec.lat_lo, g.lat_g));
  const grid::Ticks lat_hi = std::min(grid::floor_ticks(spec.lat_hi, g.lat_g), grid::floor_ticks(g.l_up, g.lat_g));
  if (acc_hi < acc_lo || lat_hi < lat_lo) throw InfeasibleSpec("empty accuracy or latency range");

  std::mt19937_64 rng(derive_seed(spec.seed, 0x200ULL));
  const auto accs = detail::separated_ticks(spec.n, acc_lo, acc_hi, rng);
  const auto lats = detail::separated_ticks(spec.n, lat_lo, lat_hi, rng);

  std::vector<ModelProfile> zoo;
  zoo.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "m%04zu", i);
    zoo.push_back({id, std::string("synthetic-") + id, grid::value(accs[i], g.acc_g), grid::value(lats[i], g.lat_g),
                   spec.num_classes});
  }
  return zoo;
}

// Brute-force frontier discovery: probes every (accuracy, latency) grid
// point. For each latency tick it records the highest served accuracy; the
// frontier sits where that staircase steps up.
template <QueryEndpoint E>
FrontierEstimate grid_scan_oracle(E& ep, const GranularityConfig& g) {
  const grid::Ticks acc_max = grid::floor_ticks(1.0, g.acc_g);
  const grid::Ticks lat_max = grid::floor_ticks(g.l_up, g.lat_g);
  FrontierEstimate est;
  std::vector<FrontierRow> ascending;
  grid::Ticks prev_best = 0;
  for (grid::Ticks l = 1; l <= lat_max; ++l) {
    grid::Ticks best = 0;
    for (grid::Ticks a = 1; a <= acc_max; ++a) {
      ++est.queries_spent;
      if (ep.infer(grid::value(a, g.acc_g), grid::value(l, g.lat_g), 0)) best = a;
    }
    if (best > prev_best) {
      ascending.push_back({grid::value(best, g.acc_g), grid::value(l, g.lat_g)});
      prev_best = best;
    }
  }
  est.rows.assign(ascending.rbegin(), ascending.rend());
  return est;
}

// Lower bound on agreement between classifiers with accuracies a_v and a_e.
inline double min_fidelity(double a_v, double a_e) {
  if (!(a_v >= 0.0 && a_v <= 1.0) || !(a_e >= 0.0 && a_e <= 1.0)) {
    throw DomainError("min_fidelity needs accuracies in [0, 1]");
  }
  return std::max(0.0, a_v + a_e - 1.0);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LinearFit ordinary_least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least squares needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

// Worst-case query count of fingerprinting a frontier of n models.
inline std::uint64_t fingerprint_query_bound(std::size_t n, const GranularityConfig& g) {
  const auto log2_ceil = [](double v) { return static_cast<std::uint64_t>(std::ceil(std::log2(v) - 1e-12)); };
  const std::uint64_t per_model = log2_ceil((1.0 + g.acc_g) / g.acc_g) + log2_ceil((g.l_up + g.lat_g) / g.lat_g) + 2;
  return (static_cast<std::uint64_t>(n) + 1) * per_model;
}

// ---- query-complexity suite ----

struct ComplexityRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t queries = 0;
  double acc_g = 0.0;
  double lat_g = 0.0;
  std::uint64_t seed = 0;
};

struct ComplexityReport {
  std::vector<ComplexityRecord> records;
  std::map<std::size_t, double> mean_queries;
  LinearFit fit;
};

struct ComplexityConfig {
  std::vector<std::size_t> sizes{10, 50, 100, 250, 500, 1000};
  std::size_t trials = 10;
  ZooGenSpec zoo;  // n and seed are overridden per trial
  std::uint64_t seed = 0;
};

inline ComplexityReport complexity_experiment(const ComplexityConfig& cfg) {
  if (cfg.sizes.empty()) throw ValidationError("complexity experiment needs at least one size");
  ComplexityReport report;
  for (const auto n : cfg.sizes) {
    double total = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      ZooGenSpec spec = cfg.zoo;
      spec.n = n;
      spec.seed = derive_seed(cfg.seed, n, t);
      auto frontier = build_frontier(gen_random_zoo(spec), spec.granularity);
      Router router(std::move(frontier), RouterOptions{{}, spec.seed, spec.seed, false});
      LocalEndpoint ep(router);
      const auto est = fingerprint(ep, spec.granularity);
      report.records.push_back({n, t, est.queries_spent, spec.granularity.acc_g, spec.granularity.lat_g, spec.seed});
      total += static_cast<double>(est.queries_spent);
    }
    if (cfg.trials > 0) report.mean_queries[n] = total / static_cast<double>(cfg.trials);
  }
  if (report.mean_queries.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& [n, q] : report.mean_queries) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(q);
    }
    report.fit = ordinary_least_squares(xs, ys);
  }
  return report;
}

// ---- protection-vs-goodput suite ----

// Twelve-model frontier used by the defense experiments. Latencies span
// 18.271 ms; budgets of 5, 13 and 21 ms target a small, medium and large
// victim respectively.
inline std::vector<ModelProfile> reference_zoo() {
  const std::vector<std::pair<double, double>> points{
      {0.412, 2.600}, {0.487, 3.900}, {0.553, 4.800}, {0.618, 6.300},  {0.672, 7.700},  {0.721, 9.100},
      {0.764, 10.600}, {0.801, 12.400}, {0.836, 14.200}, {0.868, 16.500}, {0.893, 18.700}, {0.917, 20.871}};
  std::vector<ModelProfile> zoo;
  for (std::size_t i = 0; i < points.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "ref%02zu", i + 1);
    zoo.push_back({id, std::string("reference-") + id, points[i].first, points[i].second, 10});
  }
  return zoo;
}

inline GranularityConfig reference_granularity() { return {0.01, 0.5, 32.0}; }

struct TradeoffRecord {
  double latency_budget = 0.0;
  double epsilon = 0.0;
  std::size_t trial = 0;
  double goodput = 0.0;
  double victim_pmf = 0.0;
  double expected_label_acc = 0.0;
  std::uint64_t q_fingerprint = 0;
  std::uint64_t q_label = 0;
  std::uint64_t q_success = 0;
  std::uint64_t q_fail = 0;
  std::uint64_t seed = 0;
  // Queries served across both phases, and how many of them came from a
  // model slower than the query's own latency spec.
  std::uint64_t served = 0;
  std::uint64_t latency_violations = 0;
};

struct TradeoffConfig {
  std::vector<ModelProfile> zoo = reference_zoo();
  GranularityConfig granularity = reference_granularity();
  std::vector<double> budgets{13.0};
  std::vector<double> epsilons{1000.0, 100.0, 50.0, 10.0};
  std::size_t trials = 30;
  std::uint64_t query_budget = 4000;
  std::uint64_t seed = 0;
};

// The highest-accuracy frontier model with latency within the budget.
inline std::optional<std::size_t> true_victim(const ParetoFrontier& frontier, double latency_budget) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    if (frontier[i].latency_ms <= latency_budget) best = i;
  }
  return best;
}

// Served queries whose model latency exceeded the query's own latency spec.
inline std::uint64_t latency_violations(const ServeLog& log, const ParetoFrontier& frontier) {
  std::uint64_t n = 0;
  for (const auto& r : log.records()) {
    if (r.outcome.served() && frontier[*r.outcome.served_index].latency_ms > r.query.lat_req) ++n;
  }
  return n;
}

// One fingerprint-mode campaign against a freshly seeded defended router.
// A campaign that aborts (no victim under the budget, or fingerprinting ate
// the budget) issues no labeling queries and scores zero.
inline TradeoffRecord run_tradeoff_trial(const ParetoFrontier& frontier, double latency_budget, double epsilon,
                                         std::size_t trial, std::uint64_t seed, std::uint64_t query_budget) {
  TradeoffRecord rec;
  rec.latency_budget = latency_budget;
  rec.epsilon = epsilon;
  rec.trial = trial;
  rec.seed = seed;

  Router router(frontier, RouterOptions{make_defense(frontier, epsilon), seed, seed, true});
  LocalEndpoint ep(router);
  std::optional<CampaignResult> campaign;
  try {
    campaign = run_campaign(ep, AttackBudget{latency_budget, query_budget}, frontier.granularity(),
                            CampaignMode::Fingerprint);
  } catch (const NoFeasibleVictim&) {
  } catch (const BudgetExhausted&) {
  }
  rec.latency_violations = latency_violations(router.log(), frontier);
  rec.served = router.telemetry().served;
  if (!campaign) {
    rec.q_fingerprint = std::min<std::uint64_t>(router.received(), query_budget);
    return rec;
  }

  rec.q_fingerprint = campaign->queries_fingerprinting;
  rec.q_label = campaign->queries_labeling;
  rec.q_success = campaign->queries_successful;
  rec.q_fail = campaign->queries_failed;
  rec.goodput = campaign->labeling_goodput().value_or(0.0);
  const auto pmf = campaign->trigger_pmf();
  if (!pmf.empty()) {
    rec.expected_label_acc = expected_label_accuracy(pmf, frontier);
    if (const auto v = true_victim(frontier, latency_budget)) {
      const auto it = pmf.find(frontier[*v].id);
      rec.victim_pmf = it == pmf.end() ? 0.0 : it->second;
    }
  }
  return rec;
}

inline std::vector<TradeoffRecord> tradeoff_experiment(const TradeoffConfig& cfg) {
  const auto frontier = build_frontier(cfg.zoo, cfg.granularity);
  std::vector<TradeoffRecord> out;
  for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto seed = derive_seed(cfg.seed, b, e, t);
        out.push_back(run_tradeoff_trial(frontier, cfg.budgets[b], cfg.epsilons[e], t, seed, cfg.query_budget));
      }
    }
  }
  return out;
}

// ---- CSV output ----

namespace detail {

inline std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

inline constexpr int kCsvSchemaVersion = 1;

// `config` lines are written as leading '#' comments before the header row.
inline void write_complexity_csv(std::ostream& os, const ComplexityReport& report,
                                 const std::vector<std::string>& config) {
  os << "# crosshair experiment=complexity schema=" << kCsvSchemaVersion << "\n";
  for (const auto& line : config) os << "# " << line << "\n";
  os << "n,trial,queries,acc_g,lat_g,seed\n";
  for (const auto& r : report.records) {
    os << r.n << ',' << r.trial << ',' << r.queries << ',' << detail::fmt_real(r.acc_g) << ','
       << detail::fmt_real(r.lat_g) << ',' << r.seed << "\n";
  }
  os << "# summary slope=" << detail::fmt_fixed(report.fit.slope)
     << " intercept=" << detail::fmt_fixed(report.fit.intercept) << " r2=" << detail::fmt_fixed(report.fit.r2)
     << "\n";
}

inline void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRecord>& records,
                               const std::vector<std::string>& config) {
  os << "# crosshair experiment=tradeoff schema=" << kCsvSchemaVersion << "\n";
  for (const auto& line : config) os << "# " << line << "\n";
  os << "L,epsilon,trial,goodput,victim_pmf,expected_label_acc,q_fingerprint,q_label,q_success,q_fail,seed\n";
  for (const auto& r : records) {
    os << detail::fmt_real(r.latency_budget) << ',' << detail::fmt_real(r.epsilon) << ',' << r.trial << ','
       << detail::fmt_fixed(r.goodput) << ',' << detail::fmt_fixed(r.victim_pmf) << ','
       << detail::fmt_fixed(r.expected_label_acc) << ',' << r.q_fingerprint << ',' << r.q_label << ','
       << r.q_success << ',' << r.q_fail << ',' << r.seed << "\n";
  }
}

}  // namespace crosshair
