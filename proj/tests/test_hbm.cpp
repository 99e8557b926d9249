#include <gtest/gtest.h>

#include <sstream>

#include "fd.hpp"
#include "hbevent/hbm.hpp"
#include "hbevent/systems.hpp"
#include "oracles.hpp"

using namespace hbevent;

namespace {

PolynomialExpr sym(const std::string& s, double c = 1.0) { return PolynomialExpr::symbol(s, c); }

SystemDefinition negated_identity() {
  SystemDefinition sys;
  sys.components = {"y"};
  StateDefinition st;
  st.dynamics = {sym("y", -1.0)};
  sys.states = {st};
  sys.finalize();
  return sys;
}

HBProblem forced(SystemDefinition sys, int H, double omega) {
  HBProblem p;
  p.sys = std::move(sys);
  p.H = H;
  p.omega = omega;
  return p;
}

Eigen::VectorXd random_unknowns(const HBProblem& p, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd u(static_cast<Eigen::Index>(p.n_unknowns()));
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = nd(rng) * scale;
  return u;
}

}  // namespace

TEST(HBM, PackRoundTrip) {
  auto p = forced(negated_identity(), 3, 1.0);
  std::mt19937_64 rng(1);
  auto u = random_unknowns(p, rng, 1.0);
  EXPECT_LT((pack_series(p, unpack_series(p, u)) - u).norm(), 1e-15);
}

TEST(HBM, LinearStateForceIsExact) {
  std::mt19937_64 rng(2);
  auto y = oracle::random_series(rng, 4);
  auto F = force_coefficients(negated_identity(), {y}, 1.0, 4);
  for (int n = -4; n <= 4; ++n) EXPECT_LT(std::abs(F[0][n] + y[n]), 1e-14);

  auto p = forced(negated_identity(), 4, 1.3);
  auto u = pack_series(p, {y});
  auto [r, J] = residual_and_jacobian(p, u);
  // dF_n/dY_n = -1, so dR/dRe Y_0 = 1
  EXPECT_NEAR(J(0, 0), 1.0, 1e-14);
}

TEST(HBM, CubicForceCoefficient) {
  auto F = force_coefficients(elements::cubic_spring(), {FourierSeries::cosine()}, 1.0, 3);
  EXPECT_NEAR(F[0][1].real(), 3.0 / 16, 1e-15);
  EXPECT_NEAR(F[0][3].real(), 1.0 / 16, 1e-15);
}

TEST(HBM, LinearOscillatorFrf) {
  MechanicalHost h;
  h.M = Eigen::MatrixXd::Identity(1, 1);
  h.D = Eigen::MatrixXd::Constant(1, 1, 0.1);
  h.K = Eigen::MatrixXd::Identity(1, 1);
  auto sys = assemble_first_order(h, Excitation{{1.0}, 1.0}, std::nullopt);
  for (double om : {0.5, 0.95, 1.7}) {
    auto p = forced(sys, 1, om);
    // force cos(Omega t) = (e^{i tau} + e^{-i tau})/2
    const cplx x1 = 0.5 / cplx(1.0 - om * om, om * 0.1);
    FourierSeries x(1), v(1);
    x.set_harmonic(1, x1);
    v.set_harmonic(1, cplx(0.0, om) * x1);
    auto r = residual(p, pack_series(p, {x, v}));
    ASSERT_TRUE(r.valid);
    EXPECT_LT(r.norm, 1e-14);
  }
}

TEST(HBM, TrivialEquilibrium) {
  for (auto el : {elements::cubic_spring(), elements::coulomb(), elements::piecewise_spring()}) {
    auto sys = assemble_first_order(two_dof_host(), std::nullopt, Attachment{el, {0}});
    auto p = forced(sys, 3, 0.8);
    auto r = residual(p, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.n_unknowns())));
    ASSERT_TRUE(r.valid) << r.error;
    EXPECT_EQ(r.norm, 0.0);
  }
}

TEST(HBM, JacobianMatchesFiniteDifferences) {
  struct Case {
    SystemDefinition sys;
    double scale;
  };
  std::vector<Case> cases{
      {assemble_first_order(two_dof_host(), Excitation{{0.0, 1.0}, 0.1}, Attachment{elements::cubic_spring(), {0}}), 0.5},
      {assemble_first_order(two_dof_host(), Excitation{{0.0, 1.0}, 0.1}, Attachment{elements::coulomb(0.35, 0.05), {0}}), 0.5},
      {assemble_first_order(two_dof_host(), Excitation{{0.0, 1.0}, 0.1}, Attachment{elements::piecewise_spring(), {0}}), 1.5},
      {elements::shape_memory_alloy(), 1.5},
      {elements::contact(1.0, 1.0, 0.3, 0.3), 0.6},
  };
  std::mt19937_64 rng(7);
  for (auto& cs : cases) {
    auto p = forced(cs.sys, 4, 0.9);
    int checked = 0;
    for (int trial = 0; trial < 6; ++trial) {
      auto u = random_unknowns(p, rng, cs.scale);
      Eigen::MatrixXd J;
      try {
        J = residual_and_jacobian(p, u).second;
      } catch (const Error& e) {
        continue;  // e.g. grazing or no periodic schedule at this draw
      }
      auto f = [&](const Eigen::VectorXd& z) {
        auto r = residual(p, z);
        if (!r.valid) throw Error(ErrorKind::ScheduleFailure, r.error);
        return r.values;
      };
      Eigen::MatrixXd Jfd;
      try {
        Jfd = fd::jacobian(f, u, 1e-6);
      } catch (const Error&) {
        continue;
      }
      EXPECT_LT(fd::relative_error(J, Jfd), 1e-6) << cs.sys.name << " trial " << trial;
      ++checked;
    }
    EXPECT_GT(checked, 2) << cs.sys.name;
  }
}

TEST(HBM, ForceCsv) {
  std::ostringstream os;
  auto sys = elements::cubic_spring();
  write_force_csv(os, sys, force_coefficients(sys, {FourierSeries::cosine()}, 1.0, 3));
  EXPECT_NE(os.str().find("x,1,0.1875"), std::string::npos);
}
