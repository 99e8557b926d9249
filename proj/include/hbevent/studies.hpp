#pragma once

// Scenario runners: forced branches, backbones, optimisation curves with
// Taylor predictions, hysteresis loops, and HBM versus time integration.

#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "hbevent/scenario.hpp"
#include "hbevent/sensitivity.hpp"
#include "hbevent/time_oracle.hpp"

namespace hbevent {

namespace detail {

/// Runs fn(i) for i < n on up to `threads` workers; rethrows the first error.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(n))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!first) first = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

inline std::vector<std::optional<double>> sweep_list(const std::vector<double>& values) {
  std::vector<std::optional<double>> out;
  for (double v : values) out.emplace_back(v);
  if (out.empty()) out.emplace_back(std::nullopt);
  return out;
}

/// Series of `u` zero-padded (or truncated) to H harmonics.
inline Eigen::VectorXd change_harmonics(const HBProblem& from, const Eigen::VectorXd& u, const HBProblem& to) {
  auto y = unpack_series(from, u);
  for (auto& s : y) {
    if (s.order() < to.H)
      s.grow(to.H);
    else
      s = truncate(s, to.H);
  }
  return pack_series(to, y, from.omega_of(u));
}

inline double fraction_in_state(const TransitionSchedule& s, int state_id) {
  double t = 0.0;
  for (const auto& e : s.entries)
    if (e.state_id == state_id) t += e.tau_plus - e.tau_minus;
  return t / kTwoPi;
}

/// Equal up to rotation.
inline bool same_cycle(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t r = 0; r < a.size(); ++r) {
    bool eq = true;
    for (std::size_t i = 0; i < a.size() && eq; ++i) eq = a[i] == b[(i + r) % b.size()];
    if (eq) return true;
  }
  return false;
}

inline std::string join_states(const std::vector<int>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "-" : "") + std::to_string(s[i]);
  return out;
}

}  // namespace detail

inline SystemDefinition scenario_system(const Scenario& sc, std::optional<double> value) {
  SystemDefinition sys = sc.system;
  if (value) sys.set_parameter(sc.sweep_parameter, *value);
  return sys;
}

inline HBProblem forced_problem(const Scenario& sc, std::optional<double> value, int H) {
  HBProblem p;
  p.sys = scenario_system(sc, value);
  p.H = H;
  p.omega = sc.start;
  return p;
}

inline HBProblem nnm_problem(const Scenario& sc, int H) {
  HBProblem p;
  p.sys = sc.system;
  p.H = H;
  p.autonomous = true;
  p.anchor_component = 0;
  return p;
}

/// Mode-shape start guess with harmonic-1 amplitude a on component 0.
inline Eigen::VectorXd nnm_guess(const HBProblem& p, const Scenario& sc, double a) {
  const std::size_t ndof = p.dim() / 2;
  if (sc.mode_shape.size() != ndof || sc.mode_shape[0] == 0.0)
    throw Error(ErrorKind::InvalidDefinition, "mode_shape needs one nonzero-leading entry per DOF");
  std::vector<FourierSeries> y(p.dim(), FourierSeries(p.H));
  for (std::size_t i = 0; i < ndof; ++i) {
    const cplx x = 0.5 * a * sc.mode_shape[i] / sc.mode_shape[0];
    y[i].set_harmonic(1, x);
    y[ndof + i].set_harmonic(1, cplx(0.0, sc.start_omega) * x);
  }
  return pack_series(p, y, sc.start_omega);
}

// ---------------------------------------------------------------------------
// branches

struct BranchStudy {
  std::optional<double> value;  // sweep parameter value
  HBProblem problem;
  ContinuationRun run;
};

inline BranchStudy run_branch(const Scenario& sc, std::optional<double> value = std::nullopt, int H = 0) {
  if (H <= 0) H = sc.H;
  BranchStudy b;
  b.value = value;
  if (sc.kind == ScenarioKind::Nnm) {
    b.problem = nnm_problem(sc, H);
    const auto start = newton_solve(b.problem, nnm_guess(b.problem, sc, sc.start), {}, sc.start);
    b.run = continue_branch(b.problem, start.u, sc.continuation);
  } else {
    b.problem = forced_problem(sc, value, H);
    const auto start = newton_solve(b.problem, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.problem.n_unknowns())));
    b.run = continue_branch(b.problem, start.u, sc.continuation);
  }
  return b;
}

/// One branch per sweep value (or a single branch), evaluated in parallel.
inline std::vector<BranchStudy> run_branches(const Scenario& sc, int threads = 1) {
  const auto values = detail::sweep_list(sc.sweep_parameter.empty() ? std::vector<double>{} : sc.sweep_values);
  std::vector<BranchStudy> out(values.size());
  detail::parallel_for(values.size(), threads, [&](std::size_t i) { out[i] = run_branch(sc, values[i]); });
  return out;
}

/// Number of turning points (sign changes of d lambda along the branch).
inline int count_folds(const ContinuationRun& run) {
  int folds = 0;
  double prev = 0.0;
  for (std::size_t i = 1; i < run.branch.size(); ++i) {
    const double d = run.branch[i].lambda - run.branch[i - 1].lambda;
    if (d == 0.0) continue;
    if (prev != 0.0 && d * prev < 0.0) ++folds;
    prev = d;
  }
  return folds;
}

/// Total energy of an unforced single-state mechanical system at tau = 0:
/// kinetic energy plus the potential of the restoring force along the
/// straight path from the origin.
inline double mechanical_energy(const HBProblem& p, const Eigen::VectorXd& u) {
  const auto& sys = p.sys;
  if (!sys.mechanical) throw Error(ErrorKind::InvalidArgument, "system has no mechanical metadata");
  const auto ndof = static_cast<Eigen::Index>(p.dim() / 2);
  const auto y = unpack_series(p, u);
  Eigen::VectorXd x(ndof), v(ndof);
  for (Eigen::Index i = 0; i < ndof; ++i) {
    x(i) = evaluate_real(y[static_cast<std::size_t>(i)], 0.0);
    v(i) = p.omega_of(u) * evaluate_real(differentiate(y[static_cast<std::size_t>(i)]), 0.0);
  }
  Eigen::MatrixXd M(ndof, ndof);
  for (Eigen::Index i = 0; i < ndof; ++i)
    for (Eigen::Index j = 0; j < ndof; ++j)
      M(i, j) = sys.mechanical->M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  detail::PointState ps{&sys.states.front(), std::vector<double>(sys.internal.size(), 0.0)};
  // 5-point Gauss-Legendre on [0, 1]
  const double gx[5] = {0.0469100770306680, 0.2307653449471585, 0.5, 0.7692346550528415, 0.9530899229693320};
  const double gw[5] = {0.1184634425280945, 0.2393143352496832, 0.2844444444444444, 0.2393143352496832,
                        0.1184634425280945};
  double V = 0.0;
  for (int k = 0; k < 5; ++k) {
    Eigen::VectorXd yy = Eigen::VectorXd::Zero(2 * ndof);
    yy.head(ndof) = gx[k] * x;
    const Eigen::VectorXd rate = detail::rate(sys, ps, yy, 0.0, 1.0);
    V += gw[k] * (-(M * rate.tail(ndof))).dot(x);
  }
  return 0.5 * v.dot(M * v) + V;
}

/// CSV rows `value,` followed by the branch columns, for every branch.
inline void write_branches_csv(std::ostream& os, const Scenario& sc, const std::vector<BranchStudy>& studies) {
  bool header = true;
  for (const auto& b : studies) {
    std::ostringstream one;
    write_branch_csv(one, b.problem, b.run);
    std::istringstream in(one.str());
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first) {
        first = false;
        if (header) os << (sc.sweep_parameter.empty() ? std::string("value") : sc.sweep_parameter) << ',' << line << '\n';
        header = false;
        continue;
      }
      os << (b.value ? *b.value : 0.0) << ',' << line << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// optimisation curve with Taylor study

struct TaylorCase {
  std::string parameter;
  double relative = 0.0;  // perturbation dp / p0
  double predicted_1 = 0.0, predicted_2 = 0.0;  // first / second-order amplitude
  double recomputed = std::numeric_limits<double>::quiet_NaN();
  double error_1 = std::numeric_limits<double>::quiet_NaN(), error_2 = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> states;        // of the recomputed solution
  double tracked_fraction = 0.0;  // of the recomputed solution
  std::string flag;               // empty, "error", "topology" or "failed"
};

struct OptPoint {
  double value = 0.0;  // sweep parameter
  double omega = 0.0;
  double amplitude = 0.0;
  double tracked_fraction = 0.0;
  std::vector<int> states;
  std::vector<TaylorCase> cases;
  Eigen::VectorXd u;

  bool diverged() const {
    for (const auto& c : cases)
      if (!c.flag.empty()) return true;
    return false;
  }
};

struct OptCurveReport {
  std::string parameter;
  int tracked_state = 1;
  double tolerance = 0.05;
  std::vector<OptPoint> points;
  std::vector<std::string> failures;  // sweep values that could not be reached

  std::size_t argmin() const {
    std::size_t k = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
      if (points[i].amplitude < points[k].amplitude) k = i;
    return k;
  }
};

/// Phase resonance: Omega free, Re Y1 of component 0 held at zero.
inline HBProblem resonance_problem(const Scenario& sc, std::optional<double> value = std::nullopt) {
  HBProblem q;
  q.sys = scenario_system(sc, value);
  q.H = sc.H;
  q.autonomous = true;
  q.phase_anchor = false;
  q.anchor_component = 0;
  return q;
}

/// Traces the forced branch over the scenario window and refines the sign
/// change of Re Y1[0] with the largest response into a phase resonance.
inline Eigen::VectorXd locate_phase_resonance(const Scenario& sc, std::optional<double> value = std::nullopt) {
  Scenario fsc = sc;
  fsc.kind = ScenarioKind::Frf;
  const auto b = run_branch(fsc, value);
  const auto& p = b.problem;
  const auto ir = static_cast<Eigen::Index>(p.re_index(0, 1));
  std::optional<std::size_t> best;
  double best_amp = -1.0;
  for (std::size_t i = 1; i < b.run.branch.size(); ++i) {
    const auto &a = b.run.branch[i - 1], &c = b.run.branch[i];
    if (a.u(ir) * c.u(ir) > 0.0) continue;
    const double amp = harmonic_amplitude(p, c.u, sc.response);
    if (amp > best_amp) {
      best_amp = amp;
      best = i;
    }
  }
  if (!best) throw Error(ErrorKind::NoConvergence, "no phase resonance inside the frequency window");
  const auto &a = b.run.branch[*best - 1], &c = b.run.branch[*best];
  const double w = a.u(ir) / (a.u(ir) - c.u(ir));
  const HBProblem q = resonance_problem(sc, value);
  Eigen::VectorXd guess(static_cast<Eigen::Index>(q.n_unknowns()));
  guess << (1.0 - w) * a.u + w * c.u, (1.0 - w) * a.omega + w * c.omega;
  return newton_solve(q, guess, {}, 0.0).u;
}

/// Moves a phase resonance to parameter value `target` in substeps of at most
/// `max_relative` times the current value, using Taylor predictors.
inline Eigen::VectorXd track_parameter(HBProblem& q, Eigen::VectorXd u, const std::string& name, double target,
                                       double max_relative = 0.15) {
  double p = q.sys.parameter(name);
  const double floor = 1e-9 * std::max(std::abs(target), std::abs(p));
  while (p != target) {
    double step = target - p;
    const double cap = max_relative * std::max(std::abs(p), std::abs(target) * 0.5);
    if (std::abs(step) > cap) step = std::copysign(cap, step);
    for (;;) {
      HBProblem q2 = q;
      q2.sys.set_parameter(name, std::abs(target - (p + step)) < floor ? target : p + step);
      try {
        const auto t = taylor_expand_solution(q, u, name);
        u = newton_solve(q2, t.predict(q2.sys.parameter(name) - p), {}, 0.0).u;
        p = q2.sys.parameter(name);
        q = std::move(q2);
        break;
      } catch (const Error& e) {
        if (!detail::recoverable(e) && e.kind() != ErrorKind::MaxIterations && e.kind() != ErrorKind::SingularJacobian)
          throw;
        step *= 0.5;
        if (std::abs(step) < floor)
          throw Error(ErrorKind::NoConvergence, "cannot continue " + name + " past " + std::to_string(p));
      }
    }
  }
  return u;
}

inline OptPoint evaluate_opt_point(const Scenario& sc, const HBProblem& q, const Eigen::VectorXd& u) {
  OptPoint pt;
  pt.value = q.sys.parameter(sc.sweep_parameter);
  pt.u = u;
  pt.omega = q.omega_of(u);
  pt.amplitude = harmonic_amplitude(q, u, sc.response);
  const auto sched = residual(q, u).schedule;
  pt.states = sched.state_sequence();
  pt.tracked_fraction = detail::fraction_in_state(sched, sc.tracked_state);
  for (const auto& name : sc.perturbed) {
    const auto t = taylor_expand_solution(q, u, name);
    const auto amp = harmonic_amplitude_taylor(q, t, sc.response);
    for (double rel : sc.perturbations) {
      TaylorCase c;
      c.parameter = name;
      c.relative = rel;
      const double dp = rel * t.p0;
      c.predicted_1 = amp.value + amp.first * dp;
      c.predicted_2 = amp.predict(dp);
      try {
        HBProblem q2 = q;
        const Eigen::VectorXd u2 = track_parameter(q2, u, name, t.p0 + dp);
        c.recomputed = harmonic_amplitude(q2, u2, sc.response);
        const auto s2 = residual(q2, u2).schedule;
        c.states = s2.state_sequence();
        c.tracked_fraction = detail::fraction_in_state(s2, sc.tracked_state);
        c.error_1 = (c.predicted_1 - c.recomputed) / c.recomputed;
        c.error_2 = (c.predicted_2 - c.recomputed) / c.recomputed;
        if (c.states.size() != pt.states.size())
          c.flag = "topology";
        else if (!(std::abs(c.error_2) <= sc.taylor_tolerance))
          c.flag = "error";
      } catch (const Error& e) {
        c.flag = "failed";
        log::warn("re-computation for " + name + " at " + sc.sweep_parameter + " = " + std::to_string(pt.value) +
                  " failed: " + e.what());
      }
      pt.cases.push_back(std::move(c));
    }
  }
  return pt;
}

/// Resonance amplitude over the sweep values with Taylor predictions for the
/// perturbed parameters. The curve starts at the scenario's own parameter
/// value and is tracked outwards in both directions.
inline OptCurveReport run_optcurve(const Scenario& sc, int threads = 1) {
  if (sc.sweep_parameter.empty()) throw Error(ErrorKind::InvalidDefinition, "optcurve needs a sweep parameter");
  OptCurveReport rep;
  rep.parameter = sc.sweep_parameter;
  rep.tracked_state = sc.tracked_state;
  rep.tolerance = sc.taylor_tolerance;
  HBProblem q0 = resonance_problem(sc);
  const double p0 = q0.sys.parameter(sc.sweep_parameter);
  const Eigen::VectorXd u0 = locate_phase_resonance(sc);

  std::vector<double> values = sc.sweep_values;
  std::sort(values.begin(), values.end());
  std::vector<std::optional<std::pair<HBProblem, Eigen::VectorXd>>> solved(values.size());
  auto walk = [&](auto begin, auto end) {
    HBProblem q = q0;
    Eigen::VectorXd u = u0;
    for (auto it = begin; it != end; ++it) {
      const auto i = static_cast<std::size_t>(&*it - values.data());
      try {
        u = track_parameter(q, u, sc.sweep_parameter, *it);
        solved[i] = std::make_pair(q, u);
      } catch (const Error& e) {
        rep.failures.push_back(sc.sweep_parameter + " = " + std::to_string(*it) + ": " + e.what());
        break;
      }
    }
  };
  const auto split = std::lower_bound(values.begin(), values.end(), p0);
  walk(split, values.end());
  walk(std::make_reverse_iterator(split), values.rend());

  std::vector<std::optional<OptPoint>> pts(values.size());
  detail::parallel_for(values.size(), threads, [&](std::size_t i) {
    if (solved[i]) pts[i] = evaluate_opt_point(sc, solved[i]->first, solved[i]->second);
  });
  for (auto& p : pts)
    if (p) rep.points.push_back(std::move(*p));
  return rep;
}

/// Points whose reference and perturbed solutions all have the reference
/// topology and whose tracked-state fraction lies in [lo, hi].
inline std::vector<const OptPoint*> mid_range(const OptCurveReport& r, double lo = 0.2, double hi = 0.9) {
  std::vector<const OptPoint*> out;
  for (const auto& p : r.points) {
    if (p.tracked_fraction < lo || p.tracked_fraction > hi) continue;
    bool same = true;
    for (const auto& c : p.cases) same = same && c.flag != "topology" && c.flag != "failed";
    if (same) out.push_back(&p);
  }
  return out;
}

inline void write_optcurve_csv(std::ostream& os, const OptCurveReport& r) {
  os << r.parameter
     << ",omega,amplitude,tracked_fraction,states,perturbed,relative,predicted_1,predicted_2,recomputed,error_1,"
        "error_2,perturbed_states,perturbed_fraction,flag\n";
  os.precision(10);
  for (const auto& p : r.points)
    for (const auto& c : p.cases)
      os << p.value << ',' << p.omega << ',' << p.amplitude << ',' << p.tracked_fraction << ','
         << detail::join_states(p.states) << ',' << c.parameter << ',' << c.relative << ',' << c.predicted_1 << ','
         << c.predicted_2 << ',' << c.recomputed << ',' << c.error_1 << ',' << c.error_2 << ','
         << detail::join_states(c.states) << ',' << c.tracked_fraction << ',' << c.flag << '\n';
}

// ---------------------------------------------------------------------------
// hysteresis under prescribed displacement

struct HysteresisPoint {
  double amplitude = 0.0;
  double dissipation = 0.0;  // work done on the element per cycle
  double energy = 0.0;       // a |F1|, peak energy of the fundamental
  double loss_factor = 0.0;  // dissipation / (2 pi energy)
  std::vector<int> states;
};

inline std::vector<HysteresisPoint> run_hysteresis(const Scenario& sc) {
  std::vector<HysteresisPoint> out;
  for (double a : sc.amplitudes) {
    std::vector<FourierSeries> y(sc.system.dimension(), FourierSeries(sc.H));
    y[0].set_harmonic(1, 0.5 * a);
    const auto sched = find_periodic_schedule(sc.system, y, 1.0);
    const auto F = force_coefficients(sc.system, y, 1.0, sc.H, &sched);
    HysteresisPoint h;
    h.amplitude = a;
    // W = int f dx over one cycle with x = a cos(tau)
    h.dissipation = kTwoPi * a * F[0][1].imag();
    h.energy = a * std::abs(F[0][1]);
    h.loss_factor = h.energy > 0.0 ? h.dissipation / (kTwoPi * h.energy) : 0.0;
    h.states = sched.state_sequence();
    out.push_back(h);
  }
  return out;
}

inline void write_hysteresis_csv(std::ostream& os, const std::vector<HysteresisPoint>& pts) {
  os << "amplitude,dissipation,energy,loss_factor,states\n";
  os.precision(12);
  for (const auto& h : pts)
    os << h.amplitude << ',' << h.dissipation << ',' << h.energy << ',' << h.loss_factor << ','
       << detail::join_states(h.states) << '\n';
}

// ---------------------------------------------------------------------------
// HBM versus time integration

struct ValidationCase {
  std::optional<double> value;
  double point = 0.0;  // Omega (frf) or amplitude (nnm)
  double omega = 0.0;
  double amplitude_hbm = 0.0, amplitude_ode = 0.0, relative_error = 0.0;
  std::vector<int> states_hbm, states_ode;
  bool same_states = false;
  bool steady = false;
  int periods = 0;
  double seconds = 0.0;
  std::string error;

  bool pass(double tol) const { return error.empty() && same_states && relative_error < tol; }
};

namespace detail {

/// First branch segment bracketing lambda, linearly interpolated.
inline std::optional<Eigen::VectorXd> branch_point_at(const ContinuationRun& run, double lambda) {
  for (std::size_t i = 1; i < run.branch.size(); ++i) {
    const auto &a = run.branch[i - 1], &b = run.branch[i];
    if ((a.lambda - lambda) * (b.lambda - lambda) > 0.0 || a.lambda == b.lambda) continue;
    const double w = (lambda - a.lambda) / (b.lambda - a.lambda);
    return Eigen::VectorXd((1.0 - w) * a.u + w * b.u);
  }
  return std::nullopt;
}

inline ValidationCase validate_point(const Scenario& sc, const BranchStudy& b, double point, const OracleSettings& os) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  ValidationCase vc;
  vc.value = b.value;
  vc.point = point;
  try {
    const auto guess = branch_point_at(b.run, point);
    if (!guess) throw Error(ErrorKind::InvalidArgument, "point " + std::to_string(point) + " not on the branch");
    HBProblem p = b.problem;
    p.H = sc.validate_H;
    HBProblem from = b.problem;
    const bool nnm = sc.kind == ScenarioKind::Nnm;
    if (!nnm) from.omega = p.omega = point;
    const Eigen::VectorXd u0 = change_harmonics(from, *guess, p);
    const auto sol = nnm ? newton_solve(p, u0, {}, point) : newton_solve(p, u0);
    vc.omega = sol.omega;
    vc.amplitude_hbm = harmonic_amplitude(p, sol.u, sc.response);
    vc.states_hbm = sol.schedule.state_sequence();

    // start inside the first schedule entry, away from transitions
    const auto& e = sol.schedule.entries.front();
    const double tau = 0.5 * (e.tau_minus + e.tau_plus);
    const auto y = unpack_series(p, sol.u);
    OracleStart start;
    start.y.resize(static_cast<Eigen::Index>(p.dim()));
    for (std::size_t c = 0; c < p.dim(); ++c) start.y(static_cast<Eigen::Index>(c)) = evaluate_real(y[c], tau);
    start.tau = tau;
    start.state_id = e.state_id;
    start.internal = e.internal;
    OracleSettings s = os;
    if (nnm) {
      s.periods = 1;
      s.require_steady = false;
    }
    const auto tr = integrate_to_steady_state(p.sys, sol.omega, start, s);
    vc.steady = tr.steady;
    vc.periods = tr.periods;
    const auto F = fourier_of_last_period(tr, 1);
    vc.amplitude_ode = 2.0 * std::abs(F[sc.response][1]);
    vc.relative_error = std::abs(vc.amplitude_hbm - vc.amplitude_ode) / vc.amplitude_ode;
    vc.states_ode = tr.state_sequence();
    if (vc.states_ode.empty()) vc.states_ode = {tr.state_end};
    vc.same_states = same_cycle(vc.states_hbm, vc.states_ode);
  } catch (const Error& e) {
    vc.error = e.what();
  }
  vc.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  return vc;
}

}  // namespace detail

/// HBM at `validate_H` harmonics versus the time oracle started from the HBM
/// state, at every validation point.
inline std::vector<ValidationCase> validate_scenario(const Scenario& sc, int threads = 1, const OracleSettings& os = {}) {
  if (sc.kind != ScenarioKind::Frf && sc.kind != ScenarioKind::Nnm)
    throw Error(ErrorKind::InvalidArgument, "validation applies to frf and nnm scenarios");
  auto values = sc.validate_values.empty() ? sc.sweep_values : sc.validate_values;
  if (sc.sweep_parameter.empty()) values.clear();
  const auto list = detail::sweep_list(values);
  std::vector<BranchStudy> branches(list.size());
  detail::parallel_for(list.size(), threads, [&](std::size_t i) { branches[i] = run_branch(sc, list[i]); });
  std::vector<std::pair<std::size_t, double>> jobs;
  for (std::size_t i = 0; i < list.size(); ++i)
    for (double pt : sc.validate_points) jobs.emplace_back(i, pt);
  std::vector<ValidationCase> out(jobs.size());
  detail::parallel_for(jobs.size(), threads, [&](std::size_t k) {
    out[k] = detail::validate_point(sc, branches[jobs[k].first], jobs[k].second, os);
  });
  return out;
}

inline void write_validation_csv(std::ostream& os, const std::vector<ValidationCase>& cases) {
  os << "value,point,omega,amplitude_hbm,amplitude_ode,relative_error,states_hbm,states_ode,same_states,steady,"
        "periods,seconds,error\n";
  os.precision(12);
  for (const auto& c : cases)
    os << (c.value ? std::to_string(*c.value) : std::string()) << ',' << c.point << ',' << c.omega << ','
       << c.amplitude_hbm << ',' << c.amplitude_ode << ',' << c.relative_error << ','
       << detail::join_states(c.states_hbm) << ',' << detail::join_states(c.states_ode) << ',' << c.same_states << ','
       << c.steady << ',' << c.periods << ',' << c.seconds << ',' << '"' << c.error << '"' << '\n';
}

}  // namespace hbevent
