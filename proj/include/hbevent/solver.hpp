#pragma once

// Damped Newton corrector and pseudo-arclength continuation of HB solutions
// over Omega (forced problems) or modal amplitude (autonomous problems).

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hbevent/hbm.hpp"
#include "hbevent/linalg.hpp"
#include "hbevent/log.hpp"
#include "hbevent/sensitivity.hpp"

namespace hbevent {

struct NewtonSettings {
  double tol = 1e-9;        // residual norm, relative to max(1, |z|)
  double step_tol = 1e-10;  // step norm, relative to max(1, |z|)
  int max_iterations = 25;
  int max_halvings = 8;
  double rank_tol = 1e-12;
};

/// Value and Jacobian of a system of equations; throws hbevent::Error when
/// the point cannot be evaluated.
using EquationSystem = std::function<std::pair<Eigen::VectorXd, Eigen::MatrixXd>(const Eigen::VectorXd&)>;

struct NewtonResult {
  Eigen::VectorXd z;
  double residual_norm = 0.0;
  int iterations = 0;
};

namespace detail {

inline bool recoverable(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NoConvergence:
    case ErrorKind::StateResolutionFailure:
    case ErrorKind::SignAmbiguity:
    case ErrorKind::DegenerateSeries:
    case ErrorKind::ScheduleFailure:
    case ErrorKind::GrazingTransition:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

/// Gauss-Newton with step halving; square systems reduce to plain Newton.
inline NewtonResult newton(const EquationSystem& G, const Eigen::VectorXd& z0, const NewtonSettings& s = {}) {
  for (Eigen::Index i = 0; i < z0.size(); ++i)
    if (!std::isfinite(z0(i))) throw Error(ErrorKind::InvalidArgument, "non-finite initial guess");
  Eigen::VectorXd z = z0;
  auto [r, J] = G(z);
  double norm = r.norm();
  for (int it = 0; it < s.max_iterations; ++it) {
    const double scale = std::max(1.0, z.norm());
    const Eigen::VectorXd dz = solve_full_rank(J, Eigen::VectorXd(-r), s.rank_tol);
    if (norm <= s.tol * scale && dz.norm() <= s.step_tol * scale) return {z + dz, norm, it + 1};

    double alpha = 1.0;
    std::optional<Error> last_error;
    bool accepted = false;
    for (int h = 0; h <= s.max_halvings; ++h, alpha *= 0.5) {
      const Eigen::VectorXd trial = z + alpha * dz;
      try {
        auto [rt, Jt] = G(trial);
        const double nt = rt.norm();
        if (!std::isfinite(nt)) continue;
        // accept decrease, or the shortest step once halving is exhausted
        if (nt < norm || h == s.max_halvings) {
          z = trial;
          r = std::move(rt);
          J = std::move(Jt);
          norm = nt;
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (!detail::recoverable(e)) throw;
        last_error = e;
      }
    }
    if (!accepted) {
      if (last_error) throw *last_error;
      throw Error(ErrorKind::NoConvergence, "Newton step produced no finite residual");
    }
    log::debug("newton iteration " + std::to_string(it + 1) + ": |R| = " + std::to_string(norm));
    if (norm <= s.tol * std::max(1.0, z.norm()) && alpha * dz.norm() <= s.step_tol * std::max(1.0, z.norm()))
      return {z, norm, it + 1};
  }
  throw Error(ErrorKind::MaxIterations, "Newton did not converge in " + std::to_string(s.max_iterations) +
                                            " iterations (|R| = " + std::to_string(norm) + ")");
}

/// Equations of an HB problem with optional amplitude constraint
/// Re Y_1 = amplitude / 2 on the anchor component (autonomous problems).
inline EquationSystem hb_equations(const HBProblem& p, std::optional<double> amplitude = std::nullopt) {
  return [&p, amplitude](const Eigen::VectorXd& u) {
    auto [res, J] = residual_and_jacobian(p, u);
    if (!amplitude) return std::make_pair(res.values, J);
    const auto m = res.values.size();
    Eigen::VectorXd r(m + 1);
    r << res.values, 0.0;
    Eigen::MatrixXd JJ = Eigen::MatrixXd::Zero(m + 1, J.cols());
    JJ.topRows(m) = J;
    const auto col = static_cast<Eigen::Index>(p.re_index(static_cast<std::size_t>(p.anchor_component), 1));
    r(m) = u(col) - 0.5 * *amplitude;
    JJ(m, col) = 1.0;
    return std::make_pair(r, JJ);
  };
}

struct HBSolution {
  Eigen::VectorXd u;
  double omega = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  TransitionSchedule schedule;
};

inline HBSolution newton_solve(const HBProblem& p, const Eigen::VectorXd& u0, const NewtonSettings& s = {},
                               std::optional<double> amplitude = std::nullopt) {
  auto res = newton(hb_equations(p, amplitude), u0, s);
  HBSolution sol;
  sol.u = std::move(res.z);
  sol.omega = p.omega_of(sol.u);
  sol.iterations = res.iterations;
  auto r = residual(p, sol.u);
  if (!r.valid) throw Error(ErrorKind::ScheduleFailure, r.error);
  sol.residual_norm = r.norm;
  sol.schedule = std::move(r.schedule);
  return sol;
}

// ---------------------------------------------------------------------------
// continuation

struct ContinuationSettings {
  double lambda_min = -std::numeric_limits<double>::infinity();
  double lambda_max = std::numeric_limits<double>::infinity();
  double initial_step = 0.02;
  double min_step = 1e-6;
  double max_step = 0.1;
  int max_points = 2000;
  int fast_iterations = 3;  // step doubles when the corrector needs at most this many
  double direction = 1.0;   // initial sign of d lambda
  /// Stop once any Fourier coefficient of y exceeds this magnitude.
  double max_coefficient = std::numeric_limits<double>::infinity();
  NewtonSettings newton;
};

enum class Termination { RangeExit, MaxPoints, StepCollapse, AmplitudeCap };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::RangeExit: return "range";
    case Termination::MaxPoints: return "max_points";
    case Termination::StepCollapse: return "step_collapse";
    case Termination::AmplitudeCap: return "amplitude_cap";
  }
  return "unknown";
}

struct BranchPoint {
  Eigen::VectorXd u;  // HB unknowns
  double omega = 0.0;
  double lambda = 0.0;  // Omega (forced) or amplitude (autonomous)
  double residual_norm = 0.0;
  std::size_t schedule_entries = 0;
  std::vector<int> states;
  double step = 0.0;
  int iterations = 0;
};

struct ContinuationRun {
  std::vector<BranchPoint> branch;
  ContinuationSettings settings;
  Termination termination = Termination::RangeExit;
  std::string message;
};

namespace detail {

/// Branch equations G(x) for x = [u; lambda].
struct BranchEquations {
  HBProblem p;

  std::size_t n_u() const { return p.n_unknowns(); }

  std::pair<Eigen::VectorXd, Eigen::MatrixXd> operator()(const Eigen::VectorXd& x) {
    const auto n = static_cast<Eigen::Index>(n_u());
    const double lambda = x(n);
    const Eigen::VectorXd u = x.head(n);
    if (!p.autonomous) {
      p.omega = lambda;
      auto [res, J] = residual_and_jacobian(p, u, true);
      return {res.values, J};
    }
    auto [res, J] = residual_and_jacobian(p, u);
    const auto m = res.values.size();
    Eigen::VectorXd r(m + 1);
    Eigen::MatrixXd JJ = Eigen::MatrixXd::Zero(m + 1, n + 1);
    r << res.values, 0.0;
    JJ.topLeftCorner(m, n) = J;
    const auto col = static_cast<Eigen::Index>(p.re_index(static_cast<std::size_t>(p.anchor_component), 1));
    r(m) = u(col) - 0.5 * lambda;
    JJ(m, col) = 1.0;
    JJ(m, n) = -0.5;
    return {r, JJ};
  }
};

/// Unit tangent of the branch: null direction of J oriented along `prev`.
inline Eigen::VectorXd branch_tangent(const Eigen::MatrixXd& J, const Eigen::VectorXd& prev, double rank_tol) {
  Eigen::MatrixXd B(J.rows() + 1, J.cols());
  B << J, prev.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(B.rows());
  rhs(J.rows()) = 1.0;
  Eigen::VectorXd t = solve_full_rank(B, rhs, rank_tol);
  t.normalize();
  if (t.dot(prev) < 0.0) t = -t;
  return t;
}

}  // namespace detail

/// Pseudo-arclength continuation from a converged solution `u0`; lambda
/// starts at Omega (forced) or at the harmonic-1 amplitude of the anchor
/// component (autonomous).
inline ContinuationRun continue_branch(const HBProblem& problem, const Eigen::VectorXd& u0,
                                       const ContinuationSettings& s = {}) {
  detail::BranchEquations G{problem};
  const auto n = static_cast<Eigen::Index>(G.n_u());
  const double lambda0 =
      problem.autonomous
          ? 2.0 * u0(static_cast<Eigen::Index>(problem.re_index(static_cast<std::size_t>(problem.anchor_component), 1)))
          : problem.omega;

  ContinuationRun run;
  run.settings = s;

  auto record = [&](const Eigen::VectorXd& x, double step, int iterations) {
    BranchPoint bp;
    bp.u = x.head(n);
    bp.lambda = x(n);
    HBProblem q = G.p;
    if (!q.autonomous) q.omega = bp.lambda;
    bp.omega = q.omega_of(bp.u);
    auto r = residual(q, bp.u);
    bp.residual_norm = r.norm;
    bp.schedule_entries = r.schedule.size();
    bp.states = r.schedule.state_sequence();
    bp.step = step;
    bp.iterations = iterations;
    run.branch.push_back(std::move(bp));
  };

  Eigen::VectorXd x(n + 1);
  x << u0, lambda0;
  {
    // make sure the start point satisfies the branch equations
    auto [r, J] = G(x);
    const double scale = std::max(1.0, x.norm());
    if (r.norm() > s.newton.tol * scale) {
      EquationSystem fixed = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd xx(n + 1);
        xx << u, lambda0;
        auto [rr, JJ] = G(xx);
        return std::make_pair(rr, Eigen::MatrixXd(JJ.leftCols(n)));
      };
      x.head(n) = newton(fixed, u0, s.newton).z;
    }
  }
  record(x, 0.0, 0);

  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n + 1);
  prev(n) = s.direction >= 0.0 ? 1.0 : -1.0;
  Eigen::VectorXd x_prev;
  double h = s.initial_step;
  double last_taken = h;

  while (static_cast<int>(run.branch.size()) < s.max_points) {
    Eigen::VectorXd t;
    try {
      t = detail::branch_tangent(G(x).second, prev, s.newton.rank_tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularJacobian || x_prev.size() == 0) throw;
      t = (x - x_prev).normalized();  // secant fallback
    }

    bool accepted = false;
    bool secant = false;
    while (!accepted) {
      if (h < s.min_step && !secant && x_prev.size() > 0) {
        // tangents next to nonsmooth points can be poor; retry along the secant
        secant = true;
        t = (x - x_prev).normalized();
        h = last_taken;
        log::debug("retrying along the secant at lambda = " + std::to_string(x(n)));
      }
      if (h < s.min_step) {
        run.termination = Termination::StepCollapse;
        run.message = "step size fell below " + std::to_string(s.min_step) + " at lambda = " + std::to_string(x(n));
        log::warn(run.message);
        return run;
      }
      const Eigen::VectorXd pred = x + h * t;
      EquationSystem corrector = [&](const Eigen::VectorXd& z) {
        auto [r, J] = G(z);
        Eigen::VectorXd rr(r.size() + 1);
        rr << r, t.dot(z - pred);
        Eigen::MatrixXd JJ(J.rows() + 1, J.cols());
        JJ << J, t.transpose();
        return std::make_pair(rr, JJ);
      };
      try {
        auto res = newton(corrector, pred, s.newton);
        // reject jumps to a different branch
        if ((res.z - x).norm() > 2.0 * h)
          throw Error(ErrorKind::NoConvergence, "corrector left the step sphere (distance " +
                                                    std::to_string((res.z - x).norm() / h) + " steps)");
        x_prev = x;
        x = res.z;
        prev = t;
        accepted = true;
        const double taken = h;
        last_taken = h;
        if (res.iterations <= s.fast_iterations) h = std::min(2.0 * h, s.max_step);
        if (x(n) < s.lambda_min || x(n) > s.lambda_max) {
          run.termination = Termination::RangeExit;
          return run;
        }
        record(x, taken, res.iterations);
        if (x.head(static_cast<Eigen::Index>(problem.n_y())).cwiseAbs().maxCoeff() > s.max_coefficient) {
          run.termination = Termination::AmplitudeCap;
          run.message = "amplitude cap reached at lambda = " + std::to_string(x(n));
          return run;
        }
        log::info("branch point " + std::to_string(run.branch.size()) + ": lambda = " + std::to_string(x(n)) +
                  ", step = " + std::to_string(taken) + ", iterations = " + std::to_string(res.iterations));
      } catch (const Error& e) {
        if (!detail::recoverable(e) && e.kind() != ErrorKind::MaxIterations && e.kind() != ErrorKind::SingularJacobian)
          throw;
        log::debug(std::string("corrector failed: ") + e.what());
        h *= 0.5;
      }
    }
  }
  run.termination = Termination::MaxPoints;
  return run;
}

/// Header: omega,lambda, amp_<component>_<n> for every component and
/// harmonic, residual,entries,step,states.
inline void write_branch_csv(std::ostream& os, const HBProblem& p, const ContinuationRun& run) {
  os << "omega,lambda";
  for (const auto& c : p.sys.components)
    for (int n = 0; n <= p.H; ++n) os << ",amp_" << c << '_' << n;
  os << ",residual,entries,step,states\n";
  os.precision(17);
  for (const auto& bp : run.branch) {
    os << bp.omega << ',' << bp.lambda;
    for (std::size_t c = 0; c < p.dim(); ++c)
      for (int n = 0; n <= p.H; ++n) os << ',' << harmonic_amplitude(p, bp.u, c, n);
    os << ',' << bp.residual_norm << ',' << bp.schedule_entries << ',' << bp.step << ',';
    for (std::size_t i = 0; i < bp.states.size(); ++i) os << (i ? "-" : "") << bp.states[i];
    os << '\n';
  }
}

}  // namespace hbevent
