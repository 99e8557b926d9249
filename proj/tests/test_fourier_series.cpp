#include <gtest/gtest.h>

#include <numbers>

#include "hbevent/fourier_series.hpp"
#include "oracles.hpp"

using namespace hbevent;

namespace {

double max_diff(const FourierSeries& a, const FourierSeries& b) {
  double m = 0.0;
  const int h = std::max(a.order(), b.order());
  for (int n = -h; n <= h; ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

double max_diff(const FourierSeries& a, const std::vector<cplx>& c) {
  const int h = static_cast<int>(c.size() / 2);
  double m = 0.0;
  for (int n = -h; n <= h; ++n) m = std::max(m, std::abs(a[n] - c[static_cast<std::size_t>(n + h)]));
  return m;
}

}  // namespace

TEST(FourierSeries, AddIdentityAndCancellation) {
  std::mt19937_64 rng(1);
  auto a = oracle::random_series(rng, 3);
  EXPECT_EQ(max_diff(a + FourierSeries(), a), 0.0);
  auto s = FourierSeries::constant(1.0) + FourierSeries::constant(-1.0);
  EXPECT_TRUE(s.is_zero());
}

TEST(FourierSeries, AddMatchesSampledSum) {
  std::mt19937_64 rng(2);
  auto a = oracle::random_series(rng, 3), b = oracle::random_series(rng, 3);
  auto ref = oracle::sampled_coefficients(
      [&](double t) { return oracle::point_value(a, t) + oracle::point_value(b, t); }, 3, 32);
  EXPECT_LT(max_diff(add(a, b), ref), 1e-13);
  EXPECT_TRUE(add(a, b).is_real());
}

TEST(FourierSeries, MultiplyIdentitiesAndOracle) {
  std::mt19937_64 rng(3);
  auto a = oracle::random_series(rng, 4);
  EXPECT_LT(max_diff(multiply(a, FourierSeries::constant(1.0)), a), 1e-15);

  auto two_cos = FourierSeries::cosine(1, 2.0);
  auto sq = multiply(two_cos, two_cos);
  EXPECT_EQ(sq.order(), 2);
  EXPECT_NEAR(sq[-2].real(), 1.0, 1e-15);
  EXPECT_NEAR(sq[0].real(), 2.0, 1e-15);
  EXPECT_NEAR(sq[2].real(), 1.0, 1e-15);

  auto b = oracle::random_series(rng, 4);
  auto p = multiply(a, b);
  EXPECT_EQ(p.order(), 8);
  auto ref = oracle::sampled_coefficients(
      [&](double t) { return oracle::point_value(a, t) * oracle::point_value(b, t); }, 8, 64);
  EXPECT_LT(max_diff(p, ref), 1e-12);
}

TEST(FourierSeries, ConvolutionIsLinear) {
  std::mt19937_64 rng(4);
  auto a = oracle::random_series(rng, 3), b = oracle::random_series(rng, 5), c = oracle::random_series(rng, 2);
  EXPECT_LT(max_diff(a * (b + c), a * b + a * c), 1e-13);
}

TEST(FourierSeries, Power) {
  std::mt19937_64 rng(5);
  auto a = oracle::random_series(rng, 2);
  EXPECT_LT(max_diff(power(a, 0), FourierSeries::constant(1.0)), 0.0 + 1e-300);
  EXPECT_LT(max_diff(power(a, 1), a), 1e-15);
  auto c3 = power(FourierSeries::cosine(), 3);
  EXPECT_NEAR(c3[3].real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(c3[-3].real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(c3[1].real(), 3.0 / 8, 1e-15);
  EXPECT_NEAR(c3[-1].real(), 3.0 / 8, 1e-15);
  EXPECT_THROW(power(a, -1), Error);
}

TEST(FourierSeries, Differentiate) {
  EXPECT_TRUE(differentiate(FourierSeries::constant(3.0)).is_zero());
  auto d = differentiate(FourierSeries::cosine());
  EXPECT_NEAR(std::abs(d[1] - cplx(0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d[-1] - cplx(0, -0.5)), 0.0, 1e-15);

  std::mt19937_64 rng(6);
  auto a = oracle::random_series(rng, 5);
  auto da = differentiate(a);
  const double h = 1e-5;
  for (int k = 0; k < 17; ++k) {
    const double t = 0.37 * k;
    const double fd = (oracle::point_value(a, t + h) - oracle::point_value(a, t - h)) / (2 * h);
    EXPECT_NEAR(evaluate_real(da, t), fd, 1e-6);
  }
}

TEST(FourierSeries, Evaluate) {
  EXPECT_EQ(evaluate_real(FourierSeries(4), 0.3), 0.0);
  EXPECT_NEAR(evaluate_real(FourierSeries::constant(2.0), 1.3), 2.0, 1e-15);
  EXPECT_NEAR(evaluate_real(FourierSeries::cosine(), std::numbers::pi / 3), 0.5, 1e-15);

  std::mt19937_64 rng(7);
  auto a = oracle::random_series(rng, 40);
  for (double t : {0.0, 0.5, 2.0, 5.9, 100.0}) {
    const cplx v = evaluate(a, t);
    EXPECT_NEAR(v.real(), oracle::point_value(a, t), 1e-11);
    EXPECT_LE(std::abs(v.imag()), 1e-12 * a.sum_abs());
  }
}

TEST(FourierSeries, RealInvariant) {
  std::mt19937_64 rng(8);
  auto a = oracle::random_series(rng, 6);
  auto p = power(a, 3) + differentiate(a);
  ASSERT_TRUE(p.is_real());
  for (int n = 0; n <= p.order(); ++n) EXPECT_LE(std::abs(p[-n] - std::conj(p[n])), 1e-14 * std::max(1.0, p.max_abs()));
}

TEST(DefiniteIntegral, ClosedFormCases) {
  std::mt19937_64 rng(9);
  auto a = oracle::random_series(rng, 4);
  for (int n = -4; n <= 4; ++n) {
    const cplx v = definite_integral(a, n, 0.4, 0.4 + kTwoPi);
    EXPECT_LT(std::abs(v - kTwoPi * a[n]), 1e-13);
  }
  const cplx c = definite_integral(FourierSeries::cosine(), 0, 0.0, std::numbers::pi / 2);
  EXPECT_NEAR(c.real(), 1.0, 1e-15);
  EXPECT_NEAR(c.imag(), 0.0, 1e-15);
}

TEST(DefiniteIntegral, MatchesQuadrature) {
  std::mt19937_64 rng(10);
  auto a = oracle::random_series(rng, 5);
  const int n = 2;
  const cplx ref = oracle::adaptive_quadrature(
      [&](double t) { return oracle::point_value(a, t) * std::exp(cplx{0.0, -n * t}); }, 0.7, 2.9);
  EXPECT_LT(std::abs(definite_integral(a, n, 0.7, 2.9) - ref), 1e-12);
}

TEST(DefiniteIntegral, AdditivityAndParseval) {
  std::mt19937_64 rng(11);
  auto a = oracle::random_series(rng, 5), b = oracle::random_series(rng, 3);
  for (int n = -3; n <= 3; ++n) {
    const cplx whole = definite_integral(a, n, -0.3, 4.1);
    const cplx split = definite_integral(a, n, -0.3, 1.7) + definite_integral(a, n, 1.7, 4.1);
    EXPECT_LT(std::abs(whole - split), 1e-12);
  }
  cplx parseval{0.0, 0.0};
  for (int m = -3; m <= 3; ++m) parseval += a[m] * b[-m];
  EXPECT_LT(std::abs(definite_integral(multiply(a, b), 0, 0.0, kTwoPi) - kTwoPi * parseval), 1e-12);
}

TEST(DefiniteIntegral, KernelHandlesZeroLength) {
  std::mt19937_64 rng(12);
  auto a = oracle::random_series(rng, 3);
  EXPECT_EQ(std::abs(definite_integral(a, 1, 2.0, 2.0)), 0.0);
}
