#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "chisq/error.hpp"
#include "chisq/parallel.hpp"
#include "chisq/quadrature.hpp"

using namespace chisq;

TEST(Seeds, DeriveIsStableAndDistinct) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}

TEST(Seeds, NormalDrawsHaveUnitMoments) {
  Rng rng(42);
  double s = 0, s2 = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double x = standard_normal(rng);
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(ParallelFor, RethrowsLowestIndexError) {
  try {
    parallel_for(50, 3, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error("item " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "item 7");
  }
}

TEST(Quadrature, FiniteAndInfiniteIntervals) {
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi).value, 2.0, 1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY).value,
              std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 1.0, INFINITY).value, std::exp(-1.0), 1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, -INFINITY, 0.0).value, 1.0, 1e-13);
}

TEST(Quadrature, ReportsUnmetTolerance) {
  QuadratureConfig cfg;
  cfg.max_depth = 1;
  try {
    integrate([](double x) { return 1 / std::sqrt(x); }, 0.0, 1.0, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "tolerance-not-met");
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
  }
}
