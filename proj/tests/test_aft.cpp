#include <gtest/gtest.h>

#include <sstream>

#include "hbevent/aft.hpp"
#include "hbevent/elements.hpp"

using namespace hbevent;

namespace {

std::vector<FourierSeries> harmonic(double amp, int H, double offset = 0.0) {
  FourierSeries x(H);
  x.set_harmonic(0, offset);
  x.set_harmonic(1, cplx(0.5 * amp, 0.0));
  return {x};
}

double force_error(const std::vector<FourierSeries>& a, const std::vector<FourierSeries>& b, int H) {
  double e = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c)
    for (int n = 0; n <= H; ++n) e = std::max(e, std::abs(a[c][n] - b[c][n]));
  return e;
}

}  // namespace

TEST(Aft, SingleStatePolynomialIsExact) {
  const auto sys = elements::cubic_spring(0.7);
  const int H = 5;
  FourierSeries x(H);
  x.set_harmonic(0, 0.1);
  x.set_harmonic(1, cplx(0.4, -0.2));
  x.set_harmonic(2, cplx(0.1, 0.3));
  x.set_harmonic(5, cplx(-0.05, 0.02));
  const std::vector<FourierSeries> y{x};
  const auto ana = force_coefficients(sys, y, 1.0, H);
  // cubic of order H needs N > 2 * 3H + 1 samples for alias-free harmonics up to H
  const auto aft = aft_force_coefficients(sys, y, 1.0, AftConfig{64, H});
  EXPECT_LT(force_error(aft, ana, H), 1e-12);
}

TEST(Aft, CoulombErrorDecreasesButPersists) {
  const auto sys = elements::coulomb(0.35, 0.05);
  const int H = 7;
  const auto y = harmonic(1.0, H);
  const auto ana = force_coefficients(sys, y, 1.0, H);
  double prev = std::numeric_limits<double>::infinity();
  for (int N : {64, 256, 1024, 4096}) {
    const double e = force_error(aft_force_coefficients(sys, y, 1.0, AftConfig{N, H}), ana, H);
    EXPECT_GT(e, 1e-10) << N;
    EXPECT_LT(e, prev) << N;
    prev = e;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Aft, StateSequenceFollowsSampleAndHold) {
  const auto sys = elements::coulomb(0.35, 0.05);
  const auto r = aft_evaluate(sys, harmonic(1.0, 3), 1.0, AftConfig{128, 3});
  int changes = 0;
  for (std::size_t k = 1; k < r.states.size(); ++k) changes += r.states[k] != r.states[k - 1];
  changes += r.states.back() != r.states.front();
  EXPECT_EQ(changes, 4);  // stick, slip, stick, slip per period
}

TEST(Aft, RejectsAliasingSampleCount) {
  const auto sys = elements::coulomb();
  try {
    aft_force_coefficients(sys, harmonic(1.0, 7), 1.0, AftConfig{20, 7});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  AftConfig demo{20, 7};
  demo.allow_aliasing = true;
  EXPECT_NO_THROW(aft_force_coefficients(sys, harmonic(1.0, 7), 1.0, demo));
}

TEST(Aft, FrozenSwitchingHasNoCurvatureForPiecewiseLinearElement) {
  const auto sys = elements::coulomb(0.35, 0.05);
  const int H = 5;
  const AftConfig cfg{1024, H};
  const auto y = harmonic(1.0, H);
  const auto plan = aft_evaluate(sys, y, 1.0, cfg).plan;
  const double h = 1e-3;
  auto shifted = [&](double d) {
    auto s = y;
    s[0].set_harmonic(1, s[0][1] + d);
    return aft_replay(sys, s, 1.0, cfg, plan);
  };
  const auto fp = shifted(h), f0 = shifted(0.0), fm = shifted(-h);
  const cplx d2_aft = (fp[0][1] - 2.0 * f0[0][1] + fm[0][1]) / (h * h);

  HBProblem p;
  p.sys = sys;
  p.H = H;
  const auto var = unknown_seeds(p).col(static_cast<Eigen::Index>(p.re_index(0, 1)));
  const auto jets = evaluate_residual_jets(p, pack_series(p, y), var, 2);
  const cplx d2_ana = jets.force[0][1].dd[0];
  EXPECT_LT(std::abs(d2_aft), 1e-6);
  EXPECT_GT(std::abs(d2_ana), 1e-2);
}

TEST(Aft, ComparisonIsDeterministicWithControlRow) {
  const auto sys = elements::contact();
  CompareSettings s;
  s.trials = 2;
  s.jacobian_trials = 1;
  s.sample_counts = {64, 256};
  s.timing_repetitions = 1;
  s.timing_draws = 1;
  s.seed = 42;
  const auto a = compare_methods(sys, s);
  const auto b = compare_methods(sys, s);
  ASSERT_EQ(a.rows.size(), 3u);
  EXPECT_EQ(a.rows[0].method, "analytic");
  EXPECT_EQ(a.rows[0].err_max, 0.0);
  EXPECT_EQ(a.rows[0].jac_fd_max, 0.0);
  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].err_mean, b.rows[i].err_mean);
    EXPECT_EQ(a.rows[i].jac_fd_mean, b.rows[i].jac_fd_mean);
    EXPECT_GT(a.rows[i].err_mean, 0.0);
  }
  std::ostringstream os;
  write_compare_csv(os, a);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "method,N_td,trials,err_mean,err_min,err_max,jac_fd_mean,jac_fd_max,jac_frozen_mean,jac_frozen_max,"
            "t_force_s,t_jacobian_s,ratio_force,ratio_jacobian");
}

TEST(Aft, ThreadedTrialsMatchSerial) {
  const auto sys = elements::contact();
  CompareSettings s;
  s.trials = 4;
  s.jacobian_trials = 0;
  s.sample_counts = {128};
  s.timing_repetitions = 1;
  s.timing_draws = 1;
  const auto a = compare_methods(sys, s);
  s.threads = 3;
  const auto b = compare_methods(sys, s);
  EXPECT_EQ(a.rows[1].err_mean, b.rows[1].err_mean);
  EXPECT_EQ(a.rows[1].err_max, b.rows[1].err_max);
}
