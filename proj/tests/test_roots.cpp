#include <gtest/gtest.h>

#include <numbers>

#include "hbevent/roots.hpp"
#include "oracles.hpp"

using namespace hbevent;
constexpr double pi = std::numbers::pi;

TEST(Roots, Cosine) {
  auto rs = find_roots(FourierSeries::cosine(), 0.0);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_NEAR(rs.roots[0], pi / 2, 1e-14);
  EXPECT_NEAR(rs.roots[1], 3 * pi / 2, 1e-14);
}

TEST(Roots, ConstantHasNone) {
  EXPECT_TRUE(find_roots(FourierSeries::constant(1.0)).empty());
  EXPECT_FALSE(next_root_after(FourierSeries::constant(1.0), 0.3).has_value());
}

TEST(Roots, ZeroSeriesIsReported) {
  try {
    find_roots(FourierSeries(3));
    FAIL() << "expected DegenerateSeries";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSeries);
  }
}

TEST(Roots, NextRootAfter) {
  EXPECT_NEAR(*next_root_after(FourierSeries::cosine(), pi / 2), 3 * pi / 2, 1e-14);
  EXPECT_NEAR(*next_root_after(FourierSeries::sine(), 0.0), pi, 1e-14);
  // wraps into the next period
  EXPECT_NEAR(*next_root_after(FourierSeries::cosine(), 3 * pi / 2), 2 * pi + pi / 2, 1e-14);
}

TEST(Roots, ShiftedWindow) {
  auto rs = find_roots(FourierSeries::cosine(), 2.0);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_NEAR(rs.roots[0], 3 * pi / 2, 1e-14);
  EXPECT_NEAR(rs.roots[1], 2 * pi + pi / 2, 1e-14);
}

TEST(Roots, TangentialRootIsFlagged) {
  // 1 - cos(tau) touches zero at tau = 0
  auto a = FourierSeries::constant(1.0) - FourierSeries::cosine();
  auto rs = find_roots(a, -1.0);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_NEAR(rs.roots[0], 0.0, 1e-6);
  EXPECT_TRUE(rs.grazing[0]);
}

TEST(Roots, RandomSeriesMatchDenseSampling) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = 1 + trial % 8;
    auto a = oracle::random_series(rng, h);
    const double t0 = 0.1 * trial;
    auto rs = find_roots(a, t0);
    auto ref = oracle::bracketed_roots([&](double t) { return oracle::point_value(a, t); }, t0);
    ASSERT_EQ(rs.size(), ref.size()) << "trial " << trial;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(rs.roots[i], ref[i], 1e-8);
      EXPECT_LT(std::abs(oracle::point_value(a, rs.roots[i])), 1e-10 * a.max_abs());
    }
    // no sign change between consecutive roots
    std::vector<double> edges{t0};
    edges.insert(edges.end(), rs.roots.begin(), rs.roots.end());
    edges.push_back(t0 + kTwoPi);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      int sign = 0;
      for (int k = 1; k < 1024; ++k) {
        const double t = edges[i] + (edges[i + 1] - edges[i]) * k / 1024.0;
        const double v = oracle::point_value(a, t);
        const int s = (v > 0) - (v < 0);
        if (sign == 0) sign = s;
        EXPECT_TRUE(s == 0 || s == sign);
      }
    }
  }
}
