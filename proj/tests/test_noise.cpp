#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/laplace.hpp>

#include "crosshair/noise.hpp"

using namespace crosshair;

TEST(LaplaceQuantile, FrozenValues) {
  EXPECT_EQ(laplace_inverse_cdf(0.5, 1.0), 0.0);
  EXPECT_EQ(laplace_inverse_cdf(0.5, 37.0), 0.0);
  EXPECT_NEAR(laplace_inverse_cdf(0.25, 1.0), -0.6931471805599453, 1e-15);
  EXPECT_NEAR(laplace_inverse_cdf(0.75, 2.0), 1.3862943611198906, 1e-15);
}

TEST(LaplaceQuantile, MatchesBoost) {
  for (const double b : {0.01, 0.5, 1.0, 18.271}) {
    const boost::math::laplace_distribution<double> ref(0.0, b);
    for (int i = 1; i < 2000; ++i) {
      const double u = i / 2000.0;
      EXPECT_NEAR(laplace_inverse_cdf(u, b), boost::math::quantile(ref, u), 1e-12 * (1.0 + b * 10)) << u;
    }
    for (const double u : {1e-12, 1e-6, 1.0 - 1e-6, 1.0 - 1e-12}) {
      EXPECT_NEAR(laplace_inverse_cdf(u, b), boost::math::quantile(ref, u), 1e-6 * b) << u;
    }
  }
}

TEST(LaplaceQuantile, DomainErrors) {
  EXPECT_THROW(laplace_inverse_cdf(0.0, 1.0), DomainError);
  EXPECT_THROW(laplace_inverse_cdf(1.0, 1.0), DomainError);
  EXPECT_THROW(laplace_inverse_cdf(-0.1, 1.0), DomainError);
  EXPECT_THROW(laplace_inverse_cdf(0.3, 0.0), DomainError);
  EXPECT_THROW(laplace_inverse_cdf(0.3, -1.0), DomainError);
  EXPECT_THROW(laplace_inverse_cdf(std::nan(""), 1.0), DomainError);
}

TEST(LaplaceQuantile, SymmetryScaleMonotone) {
  double prev = -INFINITY;
  for (int i = 1; i < 10000; ++i) {
    const double u = i / 10000.0;
    const double x = laplace_inverse_cdf(u, 1.3);
    EXPECT_NEAR(x, -laplace_inverse_cdf(1.0 - u, 1.3), 1e-12);
    EXPECT_NEAR(laplace_inverse_cdf(u, 3.9), 3.0 * x, 1e-12 * (1 + std::abs(x)));
    EXPECT_GE(x, prev);
    prev = x;
  }
}

TEST(NoiseSource, Reproducible) {
  NoiseSource a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  const double a1 = sample(a, {1.0}), a2 = sample(a, {1.0});
  EXPECT_EQ(a1, sample(b, {1.0}));
  EXPECT_EQ(a2, sample(b, {1.0}));
  EXPECT_NE(a1, a2);
  EXPECT_NE(a1, sample(c, {1.0}));
  EXPECT_NE(a1, sample(d, {1.0}));
  EXPECT_EQ(a.draws(), 2u);
}

TEST(NoiseSource, UniformStaysInsideOpenInterval) {
  NoiseSource src(1, 0);
  double lo = 1, hi = 0;
  for (int i = 0; i < 1000000; ++i) {
    const double u = src.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 1e-5);
  EXPECT_GT(hi, 1 - 1e-5);
}

TEST(NoiseSource, UniformBinsWithinThreeSigma) {
  NoiseSource src(99, 3);
  constexpr int kBins = 20;
  constexpr int kDraws = 200000;
  std::vector<int> bins(kBins);
  for (int i = 0; i < kDraws; ++i) ++bins[static_cast<int>(src.uniform_open() * kBins)];
  const double p = 1.0 / kBins;
  const double sigma = std::sqrt(kDraws * p * (1 - p));
  for (const int n : bins) EXPECT_NEAR(n, kDraws * p, 3.5 * sigma);
}

TEST(Sample, MomentsAndKolmogorovSmirnov) {
  constexpr int kDraws = 1000000;
  NoiseSource src(2024, 0);
  std::vector<double> xs(kDraws);
  double sum = 0;
  for (auto& x : xs) {
    x = sample(src, {1.0});
    sum += x;
  }
  const double mean = sum / kDraws;
  double ss = 0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / (kDraws - 1);
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 2.0, 0.05);

  std::sort(xs.begin(), xs.end());
  const boost::math::laplace_distribution<double> ref(0.0, 1.0);
  double ks = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double f = boost::math::cdf(ref, xs[i]);
    ks = std::max({ks, f - static_cast<double>(i) / kDraws, static_cast<double>(i + 1) / kDraws - f});
  }
  EXPECT_LT(ks, 0.005);
}

TEST(DeriveSeed, DistinctAndStable) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
  EXPECT_NE(derive_seed(0), derive_seed(1));
}
