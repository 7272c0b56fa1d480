#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "crosshair/simlab.hpp"

using namespace crosshair;

TEST(GenRandomZoo, SingleModel) {
  const auto zoo = gen_random_zoo({1, 0.1, 0.99, 1, 100, {0.001, 0.1, 100}, 4, 10});
  ASSERT_EQ(zoo.size(), 1u);
  EXPECT_NO_THROW(zoo[0].validate());
}

TEST(GenRandomZoo, Deterministic) {
  const ZooGenSpec spec{12, 0.1, 0.99, 1, 100, {0.001, 0.1, 100}, 99, 10};
  EXPECT_EQ(gen_random_zoo(spec), gen_random_zoo(spec));
  auto other = spec;
  other.seed = 100;
  EXPECT_NE(gen_random_zoo(spec), gen_random_zoo(other));
}

TEST(GenRandomZoo, AllModelsOnFrontierAndGrid) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ZooGenSpec spec{100, 0.1, 0.99, 1, 100, {0.001, 0.1, 100}, seed, 10};
    const auto zoo = gen_random_zoo(spec);
    const auto f = build_frontier(zoo, spec.granularity);
    ASSERT_EQ(f.size(), 100u);
    for (const auto& m : zoo) {
      EXPECT_TRUE(grid::on_grid(m.accuracy, 0.001));
      EXPECT_TRUE(grid::on_grid(m.latency_ms, 0.1));
      EXPECT_GE(m.accuracy, 0.1 - 1e-12);
      EXPECT_LE(m.latency_ms, 100 + 1e-12);
    }
  }
}

TEST(GenRandomZoo, RejectsCrowdedRanges) {
  EXPECT_THROW(gen_random_zoo({60, 0.5, 0.6, 1, 100, {0.01, 1, 100}, 0, 10}), InfeasibleSpec);
  EXPECT_THROW(gen_random_zoo({10, 0.1, 0.9, 5, 8, {0.01, 1, 100}, 0, 10}), InfeasibleSpec);
  // The tightest fitting case: 2n-1 ticks.
  EXPECT_NO_THROW(gen_random_zoo({5, 0.01, 0.09, 1, 100, {0.01, 1, 100}, 0, 10}));
}

TEST(GridScanOracle, F3) {
  const GranularityConfig g{0.001, 1, 32};
  Router r(build_frontier({{"a", "a", 0.7, 5, 10}, {"b", "b", 0.8, 10, 10}, {"c", "c", 0.9, 20, 10}}, g), {});
  LocalEndpoint ep(r);
  const auto est = grid_scan_oracle(ep, g);
  EXPECT_EQ(est.rows, (std::vector<FrontierRow>{{0.9, 20}, {0.8, 10}, {0.7, 5}}));
  EXPECT_EQ(est.queries_spent, 1000u * 32u);
}

TEST(GridScanOracle, EmptyZoo) {
  const GranularityConfig g{0.01, 1, 10};
  Router r(build_frontier({}, g), {});
  LocalEndpoint ep(r);
  EXPECT_TRUE(grid_scan_oracle(ep, g).rows.empty());
}

TEST(MinFidelity, Examples) {
  EXPECT_DOUBLE_EQ(min_fidelity(0.9, 0.9), 0.8);
  EXPECT_DOUBLE_EQ(min_fidelity(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(min_fidelity(0.4, 0.4), 0.0);
  EXPECT_THROW(min_fidelity(1.1, 0.5), DomainError);
  EXPECT_THROW(min_fidelity(0.5, -0.1), DomainError);
}

TEST(MinFidelity, SymmetricAndMonotone) {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a = i / 100.0, b = j / 100.0;
      EXPECT_EQ(min_fidelity(a, b), min_fidelity(b, a));
      if (i < 100) {
        EXPECT_LE(min_fidelity(a, b), min_fidelity((i + 1) / 100.0, b));
      }
    }
  }
}

TEST(MinFidelity, AgreementNeverBelowFloor) {
  std::size_t violations = 0;
  for (int k = 2; k <= 100; ++k) {
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        const double a = i / 100.0, b = j / 100.0;
        violations += expected_agreement(a, b, k) < min_fidelity(a, b);
      }
    }
  }
  EXPECT_EQ(violations, 0u);
}

TEST(LeastSquares, ExactLineAndErrors) {
  const auto fit = ordinary_least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(fit.slope, 2, 1e-12);
  EXPECT_NEAR(fit.intercept, 1, 1e-12);
  EXPECT_NEAR(fit.r2, 1, 1e-12);
  EXPECT_THROW(ordinary_least_squares({1}, {1}), DomainError);
  EXPECT_THROW(ordinary_least_squares({1, 1}, {1, 2}), DomainError);
}

TEST(QueryBound, Formula) {
  // ceil(log2(1001)) = 10, ceil(log2(33)) = 6.
  EXPECT_EQ(fingerprint_query_bound(3, {0.001, 1, 32}), 4u * 18u);
  // ceil(log2(2)) = 1, ceil(log2(2)) = 1.
  EXPECT_EQ(fingerprint_query_bound(0, {1.0, 1, 1}), 4u);
}

TEST(Complexity, SmallRunRecordsAndFit) {
  ComplexityConfig cfg;
  cfg.sizes = {10, 40, 80};
  cfg.trials = 3;
  cfg.seed = 5;
  const auto rep = complexity_experiment(cfg);
  ASSERT_EQ(rep.records.size(), 9u);
  EXPECT_EQ(rep.mean_queries.size(), 3u);
  EXPECT_GT(rep.fit.slope, 0);
  EXPECT_GT(rep.fit.r2, 0.95);
  for (const auto& r : rep.records) EXPECT_LE(r.queries, fingerprint_query_bound(r.n, cfg.zoo.granularity));
  EXPECT_THROW(complexity_experiment(ComplexityConfig{{}, 1, {}, 0}), ValidationError);
}

TEST(Complexity, CoarserGridNeverCostsMore) {
  const auto mean_at = [](double acc_g, double lat_g) {
    ComplexityConfig cfg;
    cfg.sizes = {50};
    cfg.trials = 10;
    cfg.seed = 21;
    cfg.zoo.granularity = {acc_g, lat_g, 100};
    return complexity_experiment(cfg).mean_queries.at(50);
  };
  const double base = mean_at(0.0001, 0.01);
  EXPECT_LE(mean_at(0.0002, 0.01), base);
  EXPECT_LE(mean_at(0.0001, 0.02), base);
}

TEST(Complexity, CsvIsReproducible) {
  ComplexityConfig cfg;
  cfg.sizes = {10, 20};
  cfg.trials = 2;
  cfg.seed = 8;
  std::ostringstream a, b;
  write_complexity_csv(a, complexity_experiment(cfg), {"seed=8"});
  write_complexity_csv(b, complexity_experiment(cfg), {"seed=8"});
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("# crosshair experiment=complexity schema=1\n# seed=8\nn,trial,queries,acc_g,lat_g,seed\n", 0),
            0u);
}

TEST(Tradeoff, ZeroNoiseLimitAndReproducibility) {
  TradeoffConfig cfg;
  cfg.epsilons = {1e9};
  cfg.trials = 3;
  cfg.seed = 4;
  const auto recs = tradeoff_experiment(cfg);
  ASSERT_EQ(recs.size(), 3u);
  for (const auto& r : recs) {
    EXPECT_GE(r.goodput, 0.999);
    EXPECT_DOUBLE_EQ(r.victim_pmf, 1.0);
    EXPECT_EQ(r.q_fingerprint + r.q_label, 4000u);
    EXPECT_EQ(r.latency_violations, 0u);
    EXPECT_GE(r.served, r.q_success);
  }
  std::ostringstream a, b;
  write_tradeoff_csv(a, recs, {});
  write_tradeoff_csv(b, tradeoff_experiment(cfg), {});
  EXPECT_EQ(a.str(), b.str());
}

TEST(Tradeoff, AbortedCampaignScoresZero) {
  TradeoffConfig cfg;
  cfg.budgets = {1.0};  // below every model
  cfg.epsilons = {1e9};
  cfg.trials = 1;
  const auto recs = tradeoff_experiment(cfg);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].q_label, 0u);
  EXPECT_EQ(recs[0].goodput, 0.0);
  EXPECT_GT(recs[0].q_fingerprint, 0u);
}

TEST(ReferenceZoo, ShapeAndSensitivity) {
  const auto f = build_frontier(reference_zoo(), reference_granularity());
  EXPECT_EQ(f.size(), 12u);
  EXPECT_EQ(f[*true_victim(f, 13)].id, "ref08");
  EXPECT_EQ(f[*true_victim(f, 21)].id, "ref12");
  EXPECT_EQ(f[*true_victim(f, 5)].id, "ref03");
  EXPECT_FALSE(true_victim(f, 1));
}
