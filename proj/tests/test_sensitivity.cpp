#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fd.hpp"
#include "hbevent/sensitivity.hpp"
#include "hbevent/systems.hpp"
#include "oracles.hpp"

using namespace hbevent;

namespace {

HBProblem prescribed(SystemDefinition sys, int H) {
  HBProblem p;
  p.sys = std::move(sys);
  p.H = H;
  p.omega = 1.0;
  return p;
}

std::size_t stick_entry(const SensitivityBundle& b) {
  for (std::size_t j = 0; j < b.entries.size(); ++j)
    if (b.entries[j].state_id == 1) return j;
  throw std::runtime_error("no stick entry");
}

HBProblem assembled_coulomb(int H) {
  HBProblem p;
  p.sys = assemble_first_order(two_dof_host(), Excitation{{0.0, 1.0}, 0.1}, Attachment{elements::coulomb(0.35, 0.05), {0}});
  p.H = H;
  p.omega = 0.9;
  return p;
}

Eigen::VectorXd random_unknowns(const HBProblem& p, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd u(static_cast<Eigen::Index>(p.n_unknowns()));
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = nd(rng) * scale / (1.0 + static_cast<double>(i % p.block()));
  return u;
}

/// Flattened dF (real and imaginary parts of every F_n) along each variable.
Eigen::MatrixXd flat_first(const SensitivityBundle& b) {
  const std::size_t H = b.force[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(2 * b.force.size() * H), static_cast<Eigen::Index>(b.size()));
  for (std::size_t a = 0; a < b.size(); ++a) {
    Eigen::Index r = 0;
    for (const auto& comp : b.force)
      for (const auto& F : comp) {
        m(r++, static_cast<Eigen::Index>(a)) = F.d[a].real();
        m(r++, static_cast<Eigen::Index>(a)) = F.d[a].imag();
      }
  }
  return m;
}

}  // namespace

TEST(Sensitivity, CoulombTransitionInstantClosedForm) {
  for (auto [kt, fc] : std::vector<std::pair<double, double>>{{0.35, 0.1}, {1.0, 0.2}, {2.0, 0.5}}) {
    auto p = prescribed(elements::coulomb(kt, fc), 3);
    const Eigen::VectorXd u = pack_series(p, {FourierSeries::cosine()});
    auto b = d2F(p, u, {parameter_variable(p, "fc")});
    const std::size_t j = stick_entry(b);
    const double q = 1.0 - 2.0 * fc / kt;
    const double ts = std::acos(q);
    // stick phases start at both reversals (tau = 0 and pi)
    EXPECT_NEAR(std::fmod(b.entries[j].tau_plus.val, 0.5 * kTwoPi), ts, 1e-12);
    EXPECT_NEAR(b.dtau(j, 0), (2.0 / kt) / std::sin(ts), 1e-10);
    EXPECT_NEAR(b.d2tau(j, 0, 0), -(4.0 / (kt * kt)) * q / std::pow(1.0 - q * q, 1.5), 1e-8);
  }
}

TEST(Sensitivity, IndependentConditionHasZeroInstantDerivative) {
  // slip -> stick happens where dx/dtau vanishes, independent of fc
  auto p = prescribed(elements::coulomb(1.0, 0.2), 3);
  const Eigen::VectorXd u = pack_series(p, {FourierSeries::cosine()});
  auto b = dF(p, u, {parameter_variable(p, "fc")});
  for (std::size_t j = 0; j < b.entries.size(); ++j)
    if (b.entries[j].state_id == 2) EXPECT_EQ(b.dtau(j, 0), 0.0);
}

TEST(Sensitivity, TransitionInstantsMatchRecomputedRoots) {
  auto p = assembled_coulomb(4);
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 8 && checked < 4; ++trial) {
    const Eigen::VectorXd u = random_unknowns(p, rng, 0.6);
    std::vector<SensitivityVariable> vars{coefficient_variable(p, 0, 1), coefficient_variable(p, 0, 2, true),
                                          parameter_variable(p, "fc")};
    SensitivityBundle b;
    try {
      b = dF(p, u, vars);
    } catch (const Error&) {
      continue;
    }
    auto instants = [&](const Eigen::VectorXd& dir) {
      const double h = 1e-6;
      Eigen::VectorXd out(static_cast<Eigen::Index>(b.entries.size()));
      std::vector<double> plus, minus;
      for (double s : {h, -h}) {
        HBProblem r = p;
        Eigen::VectorXd x = p.primal(u) + s * dir;
        Eigen::VectorXd uu = x.head(static_cast<Eigen::Index>(p.n_y()));
        for (std::size_t i = 0; i < p.sys.parameters.size(); ++i)
          r.sys.parameters[i].second = x(static_cast<Eigen::Index>(p.param_slot(i)));
        auto rs = residual(r, uu);
        if (!rs.valid || rs.schedule.size() != b.entries.size()) throw std::runtime_error("schedule changed");
        auto& v = s > 0 ? plus : minus;
        for (std::size_t j = 0; j < b.entries.size(); ++j) v.push_back(rs.schedule.entries[j].tau_plus);
      }
      for (std::size_t j = 0; j < b.entries.size(); ++j)
        out(static_cast<Eigen::Index>(j)) = (plus[j] - minus[j]) / (2 * h);
      return out;
    };
    bool ok = true;
    for (std::size_t a = 0; a < vars.size() && ok; ++a) {
      Eigen::VectorXd fdv;
      try {
        fdv = instants(vars[a].direction);
      } catch (const std::runtime_error&) {
        ok = false;
        break;
      }
      for (std::size_t j = 0; j < b.entries.size(); ++j)
        EXPECT_NEAR(b.dtau(j, a), fdv(static_cast<Eigen::Index>(j)), 1e-6 * std::max(1.0, std::abs(fdv(static_cast<Eigen::Index>(j)))))
            << "entry " << j << " variable " << vars[a].label;
    }
    if (ok) ++checked;
  }
  EXPECT_GE(checked, 2);
}

TEST(Sensitivity, SecondDerivativesMatchDifferencesOfFirst) {
  auto p = assembled_coulomb(3);
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 10 && checked < 3; ++trial) {
    const Eigen::VectorXd u = random_unknowns(p, rng, 0.6);
    std::vector<SensitivityVariable> vars{coefficient_variable(p, 0, 1), coefficient_variable(p, 0, 1, true),
                                          coefficient_variable(p, 0, 3), parameter_variable(p, "kt")};
    SensitivityBundle b;
    try {
      b = d2F(p, u, vars);
    } catch (const Error&) {
      continue;
    }
    const double h = 1e-6;
    Eigen::MatrixXd fd2(flat_first(b).rows(), 0);
    bool ok = true;
    for (std::size_t a = 0; a < vars.size() && ok; ++a) {
      std::vector<Eigen::MatrixXd> side;
      for (double s : {h, -h}) {
        HBProblem r = p;
        const Eigen::VectorXd x = p.primal(u) + s * vars[a].direction;
        for (std::size_t i = 0; i < p.sys.parameters.size(); ++i)
          r.sys.parameters[i].second = x(static_cast<Eigen::Index>(p.param_slot(i)));
        try {
          std::vector<SensitivityVariable> rv;
          for (const auto& v : vars) rv.push_back({v.label, v.direction});
          auto bb = dF(r, x.head(static_cast<Eigen::Index>(p.n_y())), rv);
          if (bb.entries.size() != b.entries.size()) ok = false;
          side.push_back(flat_first(bb));
        } catch (const Error&) {
          ok = false;
        }
      }
      if (!ok) break;
      const Eigen::MatrixXd col = (side[0] - side[1]) / (2 * h);
      Eigen::MatrixXd analytic(col.rows(), col.cols());
      for (std::size_t q = 0; q < vars.size(); ++q) {
        Eigen::Index r = 0;
        for (const auto& comp : b.force)
          for (const auto& F : comp) {
            const cplx v = F.dd[pair_index(a, q, b.shape.directions)];
            analytic(r++, static_cast<Eigen::Index>(q)) = v.real();
            analytic(r++, static_cast<Eigen::Index>(q)) = v.imag();
          }
      }
      EXPECT_LT(fd::relative_error(analytic, col), 1e-5) << "variable " << vars[a].label;
      EXPECT_GT(analytic.cwiseAbs().maxCoeff(), 1e-6);
    }
    if (ok) ++checked;
  }
  EXPECT_GE(checked, 2);
}

TEST(Sensitivity, SecondDerivativesSymmetric) {
  auto p = assembled_coulomb(3);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd u = random_unknowns(p, rng, 0.6);
    auto a = coefficient_variable(p, 0, 1), c = parameter_variable(p, "fc");
    try {
      auto b1 = d2F(p, u, {a, c});
      auto b2 = d2F(p, u, {c, a});
      for (std::size_t k = 0; k < b1.force.size(); ++k)
        for (int n = 0; n <= p.H; ++n) {
          const cplx x = b1.second(k, n, 0, 1), y = b2.second(k, n, 1, 0);
          EXPECT_LE(std::abs(x - y), 1e-9 * std::max(1.0, std::abs(x)));
        }
    } catch (const Error&) {
    }
  }
}

TEST(Sensitivity, FrozenInstantsMakeCoulombSecondDerivativesVanish) {
  auto p = assembled_coulomb(3);
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::VectorXd u = random_unknowns(p, rng, 0.6);
    std::vector<SensitivityVariable> vars;
    for (std::size_t i = 0; i < p.n_y(); i += 3) vars.push_back(unknown_variable(p, i));
    try {
      auto full = d2F(p, u, vars);
      HBProblem f = p;
      f.settings.freeze_transition_times = true;
      auto frozen = d2F(f, u, vars);
      double full_max = 0.0;
      for (std::size_t c = 0; c < p.dim(); ++c)
        for (int n = 0; n <= p.H; ++n)
          for (std::size_t q = 0; q < frozen.shape.second_size(); ++q) {
            EXPECT_EQ(frozen.force[c][static_cast<std::size_t>(n)].dd[q], cplx(0.0, 0.0));
            full_max = std::max(full_max, std::abs(full.force[c][static_cast<std::size_t>(n)].dd[q]));
          }
      if (full.entries.size() > 1) EXPECT_GT(full_max, 1e-6);
      ++checked;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(checked, 3);
}

TEST(Sensitivity, LinearStateHasNoSecondDerivatives) {
  SystemDefinition sys;
  sys.components = {"y"};
  StateDefinition st;
  st.dynamics = {PolynomialExpr::symbol("y", -1.0)};
  sys.states = {st};
  sys.finalize();
  auto p = prescribed(sys, 3);
  std::mt19937_64 rng(1);
  const Eigen::VectorXd u = random_unknowns(p, rng, 1.0);
  std::vector<SensitivityVariable> vars;
  for (std::size_t i = 0; i < p.n_y(); ++i) vars.push_back(unknown_variable(p, i));
  auto b = d2F(p, u, vars);
  for (int n = 0; n <= p.H; ++n) {
    for (const auto& x : b.force[0][static_cast<std::size_t>(n)].dd) EXPECT_EQ(x, cplx(0.0, 0.0));
    EXPECT_LT(std::abs(b.first(0, n, p.re_index(0, n)) + 1.0), 1e-14);
  }
}

TEST(Sensitivity, CubicSecondDerivativeMatchesJacobianDifference) {
  auto p = prescribed(elements::cubic_spring(0.7), 5);
  std::mt19937_64 rng(4);
  const Eigen::VectorXd u = random_unknowns(p, rng, 1.0);
  const auto v = coefficient_variable(p, 0, 1);
  auto b = d2F(p, u, {v});
  const std::size_t i = p.re_index(0, 1);
  const double h = 1e-6;
  Eigen::VectorXd up = u, um = u;
  up(static_cast<Eigen::Index>(i)) += h;
  um(static_cast<Eigen::Index>(i)) -= h;
  const Eigen::MatrixXd Jp = residual_and_jacobian(p, up).second, Jm = residual_and_jacobian(p, um).second;
  const Eigen::VectorXd fd_col = -(Jp.col(static_cast<Eigen::Index>(i)) - Jm.col(static_cast<Eigen::Index>(i))) / (2 * h);
  Eigen::VectorXd analytic(fd_col.size());
  for (int n = 0; n <= p.H; ++n) {
    analytic(static_cast<Eigen::Index>(p.re_index(0, n))) = b.second(0, n, 0, 0).real();
    if (n > 0) analytic(static_cast<Eigen::Index>(p.im_index(0, n))) = b.second(0, n, 0, 0).imag();
  }
  EXPECT_LT(fd::relative_error(analytic, fd_col), 1e-6);
}

TEST(Sensitivity, AbsentParameterHasZeroDerivative) {
  auto sys = elements::cubic_spring();
  sys.parameters.emplace_back("unused", 2.0);
  sys.finalize();
  auto p = prescribed(sys, 3);
  auto b = d2F(p, pack_series(p, {FourierSeries::cosine()}), {parameter_variable(p, "unused")});
  for (int n = 0; n <= p.H; ++n) {
    EXPECT_EQ(b.first(0, n, 0), cplx(0.0, 0.0));
    EXPECT_EQ(b.second(0, n, 0, 0), cplx(0.0, 0.0));
  }
}

namespace {

// x'' + c x' + k x = cos(Omega t) as a first-order system with parameter k.
HBProblem linear_oscillator(double k, double omega) {
  SystemDefinition sys;
  sys.components = {"x", "v"};
  sys.parameters = {{"k", k}, {"c", 0.1}};
  StateDefinition st;
  st.dynamics = {PolynomialExpr::symbol("v"),
                 PolynomialExpr{Term{-1.0, {Factor("k"), Factor("x")}}, Term{-1.0, {Factor("c"), Factor("v")}},
                                Term{1.0, {Factor("cos")}}}};
  sys.states = {st};
  sys.finalize();
  HBProblem p;
  p.sys = sys;
  p.H = 1;
  p.omega = omega;
  return p;
}

Eigen::VectorXd linear_solution(const HBProblem& p, double k) {
  const double om = p.omega;
  const cplx x1 = 0.5 / cplx(k - om * om, om * 0.1);
  FourierSeries x(1), v(1);
  x.set_harmonic(1, x1);
  v.set_harmonic(1, cplx(0.0, om) * x1);
  return pack_series(p, {x, v});
}

}  // namespace

TEST(Sensitivity, TaylorExpansionOfLinearOscillator) {
  const double k0 = 1.0;
  auto p = linear_oscillator(k0, 0.8);
  const Eigen::VectorXd u0 = linear_solution(p, k0);
  auto t = taylor_expand_solution(p, u0, "k");
  EXPECT_EQ((t.predict(0.0) - u0).norm(), 0.0);
  double prev = 0.0;
  for (double dp : {0.04, 0.02, 0.01}) {
    const double err = (t.predict(dp) - linear_solution(p, k0 + dp)).norm();
    if (prev > 0.0) EXPECT_NEAR(prev / err, 8.0, 0.5);
    prev = err;
  }
  auto a = harmonic_amplitude_taylor(p, t, 0);
  const double d = 1e-4;
  EXPECT_NEAR(a.value, harmonic_amplitude(p, u0, 0), 1e-15);
  const double ap = harmonic_amplitude(p, linear_solution(p, k0 + d), 0);
  const double am = harmonic_amplitude(p, linear_solution(p, k0 - d), 0);
  EXPECT_NEAR(a.first, (ap - am) / (2 * d), 1e-4 * std::abs(a.first));
  EXPECT_NEAR(a.second, (ap - 2 * a.value + am) / (d * d), 1e-4 * std::abs(a.second));
}

TEST(Sensitivity, CsvExport) {
  auto p = prescribed(elements::coulomb(), 2);
  auto b = d2F(p, pack_series(p, {FourierSeries::cosine()}), {parameter_variable(p, "fc")});
  std::ostringstream os;
  write_sensitivity_csv(os, p, b);
  EXPECT_EQ(os.str().rfind("quantity,index,n,a,b,re,im\n", 0), 0u);
  EXPECT_NE(os.str().find("d2tau,"), std::string::npos);
}
