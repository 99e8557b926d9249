#pragma once

// Event-driven time integration of a state-machine system, used as an
// independent reference for the frequency-domain results. Time is the
// normalized tau = Omega t, so dy/dtau = f(y, tau) / Omega.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hbevent/fourier_series.hpp"
#include "hbevent/log.hpp"
#include "hbevent/scheduler.hpp"
#include "hbevent/state_model.hpp"

namespace hbevent {

/// Value and time derivative d/dt at one instant.
struct TimeDual {
  double v = 0.0;
  double d = 0.0;
};

inline TimeDual operator+(TimeDual a, TimeDual b) { return {a.v + b.v, a.d + b.d}; }
inline TimeDual operator*(TimeDual a, TimeDual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline TimeDual operator*(double s, TimeDual a) { return {s * a.v, s * a.d}; }

inline TimeDual pow(TimeDual a, int e) {
  if (e == 0) return {1.0, 0.0};
  if (e > 0) {
    const double p = std::pow(a.v, e - 1);
    return {p * a.v, e * p * a.d};
  }
  const double p = std::pow(a.v, e);
  return {p, e * p / a.v * a.d};
}

/// Values of everything an expression may reference at one instant.
struct PointContext {
  const SystemDefinition* sys = nullptr;
  std::vector<TimeDual> y;
  double tau = 0.0;
  double omega = 1.0;
};

/// Point value of an expression. A dot factor yields the derivative part of
/// its symbol; the derivative of a dot factor itself is unknown (NaN).
inline TimeDual eval_point(const PolynomialExpr& e, const PointContext& ctx, const std::vector<double>& v,
                           const std::vector<TimeDual>& named) {
  TimeDual acc;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& t : e.terms) {
    if (t.coeff == 0.0) continue;
    TimeDual prod{t.coeff, 0.0};
    for (const auto& f : t.factors) {
      TimeDual base;
      switch (f.kind) {
        case FactorKind::Parameter:
          base = {ctx.sys->parameters.at(static_cast<std::size_t>(f.index)).second, 0.0};
          break;
        case FactorKind::Internal:
          base = {v.at(static_cast<std::size_t>(f.index)), 0.0};
          break;
        case FactorKind::Component:
        case FactorKind::Named: {
          const TimeDual s = f.kind == FactorKind::Component ? ctx.y.at(static_cast<std::size_t>(f.index))
                                                             : named.at(static_cast<std::size_t>(f.index));
          base = f.dot ? TimeDual{s.d, nan} : s;
          break;
        }
        case FactorKind::Cos:
          base = {std::cos(ctx.tau), -ctx.omega * std::sin(ctx.tau)};
          break;
        case FactorKind::Sin:
          base = {std::sin(ctx.tau), ctx.omega * std::cos(ctx.tau)};
          break;
        case FactorKind::Unresolved:
          throw Error(ErrorKind::UnboundSymbol, "unresolved symbol '" + f.symbol + "' (system not finalized)");
      }
      prod = prod * pow(base, f.exponent);
    }
    acc = acc + prod;
  }
  return acc;
}

inline std::vector<TimeDual> eval_named_point(const StateDefinition& st, const PointContext& ctx,
                                              const std::vector<double>& v) {
  std::vector<TimeDual> named;
  named.reserve(st.named.size());
  for (const auto& [n, e] : st.named) named.push_back(eval_point(e, ctx, v, named));
  return named;
}

/// Pointwise counterpart of the series update rules.
inline std::vector<double> apply_updates_point(const std::vector<InternalUpdate>& rules, const StateDefinition& next,
                                               const PointContext& ctx, const std::vector<double>& prev_v,
                                               const std::vector<TimeDual>& prev_named) {
  std::vector<double> v = prev_v;
  for (const auto& rule : rules) {
    const auto idx = static_cast<std::size_t>(rule.index);
    if (rule.kind == InternalUpdate::Kind::Expression) {
      v[idx] = eval_point(rule.expr, ctx, v, prev_named).v;
      continue;
    }
    auto sign_from = [&](const PolynomialExpr& e) {
      const TimeDual s = eval_point(e, ctx, v, prev_named);
      int sg = (s.v > 0.0) - (s.v < 0.0);
      if (sg == 0 && std::isfinite(s.d)) sg = (s.d > 0.0) - (s.d < 0.0);
      return sg;
    };
    int sg = sign_from(rule.expr);
    if (sg == 0 && rule.fallback) sg = sign_from(*rule.fallback);
    if (sg == 0)
      throw Error(ErrorKind::SignAmbiguity,
                  "sign rule for '" + rule.target + "' in state " + std::to_string(next.id) + " is undetermined");
    v[idx] = static_cast<double>(sg);
  }
  return v;
}

struct OracleSettings {
  double rtol = 1e-11;
  double atol = 1e-13;
  double max_step = kTwoPi / 64;  // in tau; bounds missed double crossings
  double event_tol = 1e-12;
  double arm_threshold = 1e-12;  // |g| below this at state entry leaves the crossing direction open
  int periods = 200;
  double steady_tol = 1e-9;
  bool require_steady = true;
  std::size_t max_events = 1000000;
  int prescribed_samples = 4096;  // per period, prescribed-displacement tracing
};

struct OracleEvent {
  double tau = 0.0;
  int from = 0, to = 0;
  std::vector<double> internal;  // after the transition
};

/// Dense output of one accepted step.
struct DenseSegment {
  double t0 = 0.0, h = 0.0;
  double t1 = 0.0;  // end of validity (t0 + h unless cut by an event)
  int state_id = 0;
  std::array<Eigen::VectorXd, 5> rc;

  Eigen::VectorXd at(double t) const {
    const double th = (t - t0) / h, th1 = 1.0 - th;
    return rc[0] + th * (rc[1] + th1 * (rc[2] + th * (rc[3] + th1 * rc[4])));
  }
};

struct Trajectory {
  double omega = 1.0;
  double tau_start = 0.0;          // start of the last integrated period
  std::vector<DenseSegment> last;  // dense output covering the last period
  std::vector<OracleEvent> events;         // events of the last period
  std::size_t total_events = 0;
  int periods = 0;
  bool steady = false;
  double period_change = 0.0;  // |y(end) - y(end - 2 pi)| of the last period
  Eigen::VectorXd y_end;
  int state_end = 0;
  std::vector<double> internal_end;

  Eigen::VectorXd at(double tau) const {
    for (const auto& s : last)
      if (tau <= s.t1) return s.at(tau);
    return last.back().at(tau);
  }

  std::vector<int> state_sequence() const {
    std::vector<int> seq;
    for (const auto& e : events) seq.push_back(e.to);
    return seq;
  }
};

struct OracleStart {
  Eigen::VectorXd y;
  double tau = 0.0;
  std::optional<int> state_id;           // resolved from the regions when absent
  std::optional<std::vector<double>> internal;
};

namespace detail {

struct PointState {
  const StateDefinition* st;
  std::vector<double> v;
};

inline PointContext point_context(const SystemDefinition& sys, const Eigen::VectorXd& y, const Eigen::VectorXd& yd,
                                  double tau, double omega) {
  PointContext ctx;
  ctx.sys = &sys;
  ctx.tau = tau;
  ctx.omega = omega;
  for (Eigen::Index i = 0; i < y.size(); ++i) ctx.y.push_back({y(i), yd(i)});
  return ctx;
}

/// dy/dt of the ODE in state `ps`; two passes so named dot factors see dy/dt.
inline Eigen::VectorXd rate(const SystemDefinition& sys, const PointState& ps, const Eigen::VectorXd& y, double tau,
                            double omega) {
  Eigen::VectorXd yd = Eigen::VectorXd::Zero(y.size());
  for (int pass = 0; pass < 2; ++pass) {
    const PointContext ctx = point_context(sys, y, yd, tau, omega);
    const auto named = eval_named_point(*ps.st, ctx, ps.v);
    Eigen::VectorXd next(y.size());
    for (std::size_t c = 0; c < ps.st->dynamics.size(); ++c)
      next(static_cast<Eigen::Index>(c)) = eval_point(ps.st->dynamics[c], ctx, ps.v, named).v;
    yd = next;
  }
  return yd;
}

/// Full point context (values and d/dt) on the ODE trajectory.
inline PointContext ode_context(const SystemDefinition& sys, const PointState& ps, const Eigen::VectorXd& y,
                                double tau, double omega) {
  return point_context(sys, y, rate(sys, ps, y, tau, omega), tau, omega);
}

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

/// State for y at tau without history; same preference rules as the scheduler.
inline PointState resolve_point_state(const SystemDefinition& sys, const std::function<PointContext()>& make_ctx) {
  const PointContext ctx = make_ctx();
  std::optional<PointState> best;
  bool best_default = false;
  for (const auto& st : sys.states) {
    if (st.region.empty() && !st.default_entry && sys.states.size() > 1) continue;
    const auto& rules = st.initial_updates.empty() ? st.internal_updates : st.initial_updates;
    std::vector<double> v;
    try {
      v = apply_updates_point(rules, st, ctx, std::vector<double>(sys.internal.size(), 0.0),
                              std::vector<TimeDual>(sys.named().size()));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SignAmbiguity) continue;
      throw;
    }
    const auto named = eval_named_point(st, ctx, v);
    bool holds = true;
    for (const auto& p : st.region) holds = holds && compare(eval_point(p.expr, ctx, v, named).v, p.op);
    if (!holds) continue;
    if (!best || (st.default_entry && !best_default)) {
      best = PointState{&st, v};
      best_default = st.default_entry;
    }
  }
  if (!best) throw Error(ErrorKind::StateResolutionFailure, "no state region contains the initial point");
  return *best;
}

/// Tracks the crossing direction of every transition condition of the active state.
class EventWatch {
 public:
  EventWatch(const StateDefinition& st, double arm) : st_(&st), arm_(arm), last_(st.successors.size(), 0) {}

  /// Conditions at an instant (evaluated in the active state).
  std::vector<double> conditions(const PointContext& ctx, const std::vector<double>& v) const {
    const auto named = eval_named_point(*st_, ctx, v);
    std::vector<double> g;
    for (int to : st_->successors) g.push_back(eval_point(st_->transition_to(to)->condition, ctx, v, named).v);
    return g;
  }

  /// Successor positions whose condition changed sign since the last update.
  std::vector<std::size_t> crossed(const std::vector<double>& g) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (last_[i] != 0 && std::abs(g[i]) > 0.0 && sign(g[i]) == -last_[i]) r.push_back(i);
    return r;
  }

  void update(const std::vector<double>& g) {
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::abs(g[i]) > arm_) last_[i] = sign(g[i]);
  }

  int last(std::size_t i) const { return last_[i]; }

 private:
  const StateDefinition* st_;
  double arm_;
  std::vector<int> last_;
};

struct FoundEvent {
  double tau;
  std::size_t pos;
};

/// Earliest crossing in (lo, hi] by bisection; ties resolve to the first successor.
inline std::optional<FoundEvent> locate_event(const StateDefinition& st, const EventWatch& watch,
                                              const std::vector<std::size_t>& candidates, double lo, double hi,
                                              const std::function<PointContext(double)>& ctx_at,
                                              const std::vector<double>& v, double tol) {
  std::optional<FoundEvent> best;
  for (std::size_t pos : candidates) {
    const int s0 = watch.last(pos);
    const Transition* tr = st.transition_to(st.successors[pos]);
    auto g = [&](double t) {
      const PointContext c = ctx_at(t);
      return eval_point(tr->condition, c, v, eval_named_point(st, c, v)).v;
    };
    double a = lo, b = hi;
    while (b - a > tol) {
      const double m = 0.5 * (a + b);
      if (sign(g(m)) == s0 || g(m) == 0.0)
        a = m;
      else
        b = m;
    }
    if (tr->guard) {
      const PointContext c = ctx_at(b);
      const double gv = eval_point(tr->guard->expr, c, v, eval_named_point(st, c, v)).v;
      if (!compare(gv, tr->guard->op)) continue;
    }
    if (!best || b < best->tau - tol) best = FoundEvent{b, pos};
  }
  return best;
}

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace detail

/// Integrates `settings.periods` forcing periods (or until the period map
/// settles) from `start`. The returned trajectory keeps the last period.
inline Trajectory integrate_to_steady_state(const SystemDefinition& sys, double omega, const OracleStart& start,
                                            const OracleSettings& s = {}) {
  using namespace detail;
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "Omega must be positive");
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  if (start.y.size() != n) throw Error(ErrorKind::InvalidArgument, "initial state has the wrong dimension");

  PointState ps;
  if (start.state_id) {
    ps.st = &sys.states[sys.state_index(*start.state_id)];
    ps.v = start.internal ? *start.internal : std::vector<double>(sys.internal.size(), 0.0);
  } else {
    // values only: region predicates do not use time derivatives
    ps = resolve_point_state(sys, [&] { return point_context(sys, start.y, Eigen::VectorXd::Zero(n), start.tau, omega); });
  }

  auto f = [&](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd { return rate(sys, ps, y, t, omega) / omega; };

  Trajectory tr;
  tr.omega = omega;
  double t = start.tau;
  Eigen::VectorXd y = start.y;
  double h = std::min(s.max_step, 1e-3);
  EventWatch watch(*ps.st, s.arm_threshold);
  watch.update(watch.conditions(ode_context(sys, ps, y, t, omega), ps.v));
  Eigen::VectorXd k1 = f(t, y);
  Eigen::VectorXd y_prev_period = y;
  int prev_state = ps.st->id;
  std::vector<double> prev_v = ps.v;

  for (int period = 0; period < s.periods; ++period) {
    const double t_end = start.tau + (period + 1) * kTwoPi;
    tr.tau_start = t_end - kTwoPi;
    tr.last.clear();
    tr.events.clear();
    while (t < t_end - 1e-14) {
      h = std::min({h, s.max_step, t_end - t});
      const Eigen::VectorXd k2 = f(t + c2 * h, y + h * a21 * k1);
      const Eigen::VectorXd k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const Eigen::VectorXd k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Eigen::VectorXd k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Eigen::VectorXd k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Eigen::VectorXd y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      const Eigen::VectorXd k7 = f(t + h, y1);
      const Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = s.atol + s.rtol * std::max(std::abs(y(i)), std::abs(y1(i)));
        en = std::max(en, std::abs(err(i)) / sc);
      }
      if (!std::isfinite(en)) throw Error(ErrorKind::NoConvergence, "integration produced a non-finite state");
      if (en > 1.0) {
        h *= std::max(0.1, 0.9 * std::pow(en, -0.2));
        if (h < 1e-14) throw Error(ErrorKind::NoConvergence, "integration step size underflow");
        continue;
      }
      DenseSegment seg;
      seg.t0 = t;
      seg.h = h;
      seg.t1 = t + h;
      seg.state_id = ps.st->id;
      const Eigen::VectorXd ydiff = y1 - y;
      const Eigen::VectorXd bspl = h * k1 - ydiff;
      seg.rc = {y, ydiff, bspl, ydiff - h * k7 - bspl,
                h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7)};
      const double h_next = h * std::min(5.0, 0.9 * std::pow(std::max(en, 1e-10), -0.2));

      auto ctx_at = [&](double tt) { return ode_context(sys, ps, seg.at(tt), tt, omega); };
      const auto g1 = watch.conditions(ctx_at(t + h), ps.v);
      const auto crossing = watch.crossed(g1);
      std::optional<FoundEvent> ev;
      if (!crossing.empty()) ev = locate_event(*ps.st, watch, crossing, t, t + h, ctx_at, ps.v, s.event_tol);
      if (!ev) {
        tr.last.push_back(seg);
        watch.update(g1);
        t += h;
        y = y1;
        k1 = k7;
        h = h_next;
        continue;
      }
      // keep the step polynomial up to the event, then switch state
      const double te = ev->tau;
      const Eigen::VectorXd ye = seg.at(te);
      seg.t1 = te;
      if (te > t) tr.last.push_back(seg);
      const PointContext ce = ctx_at(te);
      const auto prev_named = eval_named_point(*ps.st, ce, ps.v);
      const int to = ps.st->successors[ev->pos];
      const auto& next = sys.states[sys.state_index(to)];
      std::vector<double> v_next = apply_updates_point(next.internal_updates, next, ce, ps.v, prev_named);
      tr.events.push_back({te, ps.st->id, to, v_next});
      if (++tr.total_events > s.max_events)
        throw Error(ErrorKind::EventStorm, "more than " + std::to_string(s.max_events) + " events");
      ps = PointState{&next, std::move(v_next)};
      t = te;
      y = ye;
      watch = EventWatch(*ps.st, s.arm_threshold);
      watch.update(watch.conditions(ode_context(sys, ps, y, t, omega), ps.v));
      k1 = f(t, y);
      h = std::max(h_next * 0.1, 1e-8);
    }
    t = t_end;
    tr.periods = period + 1;
    const double change = (y - y_prev_period).norm();
    bool same_internal = ps.st->id == prev_state;
    for (std::size_t i = 0; i < ps.v.size() && same_internal; ++i)
      same_internal = std::abs(ps.v[i] - prev_v[i]) <= s.steady_tol * std::max(1.0, std::abs(ps.v[i]));
    tr.period_change = change;
    y_prev_period = y;
    prev_state = ps.st->id;
    prev_v = ps.v;
    if (change <= s.steady_tol * std::max(1.0, y.norm()) && same_internal) {
      tr.steady = true;
      break;
    }
  }
  tr.y_end = y;
  tr.state_end = ps.st->id;
  tr.internal_end = ps.v;
  if (s.require_steady && !tr.steady)
    throw Error(ErrorKind::NoConvergence, "period map did not settle in " + std::to_string(s.periods) +
                                              " periods (last change " + std::to_string(tr.period_change) + ")");
  return tr;
}

/// Coefficients c_n, n = -H..H, of each component over the last period by
/// the trapezoidal rule at max(16 H, 256) points of the dense output.
inline std::vector<FourierSeries> fourier_of_last_period(const Trajectory& tr, int H) {
  if (tr.last.empty()) throw Error(ErrorKind::InvalidArgument, "trajectory has no dense output");
  const int N = std::max(16 * H, 256);
  const auto dim = static_cast<std::size_t>(tr.last.front().rc[0].size());
  std::vector<std::vector<double>> samples(dim, std::vector<double>(static_cast<std::size_t>(N)));
  std::size_t seg = 0;
  for (int k = 0; k < N; ++k) {
    const double tau = tr.tau_start + kTwoPi * k / N;
    while (seg + 1 < tr.last.size() && tau > tr.last[seg].t1) ++seg;
    const Eigen::VectorXd y = tr.last[seg].at(tau);
    for (std::size_t c = 0; c < dim; ++c) samples[c][static_cast<std::size_t>(k)] = y(static_cast<Eigen::Index>(c));
  }
  std::vector<FourierSeries> out;
  for (std::size_t c = 0; c < dim; ++c) {
    FourierSeries s(H);
    for (int m = 0; m <= H; ++m) {
      cplx acc{0.0, 0.0};
      for (int k = 0; k < N; ++k) {
        const double tau = tr.tau_start + kTwoPi * k / N;
        acc += samples[c][static_cast<std::size_t>(k)] * std::exp(cplx(0.0, -m * tau));
      }
      s.set_harmonic(m, acc / static_cast<double>(N));
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Event log of a system whose components follow prescribed series y(tau)
/// (no integration): `periods` periods from the seed instant.
inline std::vector<OracleEvent> trace_prescribed(const SystemDefinition& sys, const std::vector<FourierSeries>& y,
                                                 double omega, int periods, const OracleSettings& s = {},
                                                 std::optional<double> tau0 = std::nullopt) {
  using namespace detail;
  std::vector<FourierSeries> dy;
  for (const auto& c : y) dy.push_back(differentiate(c));
  auto ctx_at = [&](double t) {
    PointContext c;
    c.sys = &sys;
    c.tau = t;
    c.omega = omega;
    for (std::size_t i = 0; i < y.size(); ++i) c.y.push_back({evaluate_real(y[i], t), omega * evaluate_real(dy[i], t)});
    return c;
  };
  double t = tau0 ? *tau0 : 0.0;
  if (!tau0 && sys.seed_phase) {
    const SeriesContext sc = SeriesContext::values(sys, y, omega);
    t = seed_instant(sc, {});
  }
  PointState ps = resolve_point_state(sys, [&] { return ctx_at(t); });
  EventWatch watch(*ps.st, s.arm_threshold);
  watch.update(watch.conditions(ctx_at(t), ps.v));
  std::vector<OracleEvent> log;
  const double t_end = t + periods * kTwoPi;
  const double dt = kTwoPi / s.prescribed_samples;
  while (t < t_end) {
    const double t1 = std::min(t + dt, t_end);
    const auto g1 = watch.conditions(ctx_at(t1), ps.v);
    const auto crossing = watch.crossed(g1);
    std::optional<FoundEvent> ev;
    if (!crossing.empty()) ev = locate_event(*ps.st, watch, crossing, t, t1, ctx_at, ps.v, s.event_tol);
    if (!ev) {
      watch.update(g1);
      t = t1;
      continue;
    }
    const PointContext ce = ctx_at(ev->tau);
    const auto prev_named = eval_named_point(*ps.st, ce, ps.v);
    const int to = ps.st->successors[ev->pos];
    const auto& next = sys.states[sys.state_index(to)];
    auto v_next = apply_updates_point(next.internal_updates, next, ce, ps.v, prev_named);
    log.push_back({ev->tau, ps.st->id, to, v_next});
    if (log.size() > s.max_events) throw Error(ErrorKind::EventStorm, "too many events");
    ps = PointState{&next, std::move(v_next)};
    t = ev->tau;
    watch = EventWatch(*ps.st, s.arm_threshold);
    watch.update(watch.conditions(ctx_at(t), ps.v));
  }
  return log;
}

/// Trajectory rows `tau,state,<components>` sampled `samples` times over
/// the last period.
inline void write_trajectory_csv(std::ostream& os, const SystemDefinition& sys, const Trajectory& tr,
                                 int samples = 512) {
  os << "tau,state";
  for (const auto& c : sys.components) os << ',' << c;
  os << '\n';
  os.precision(17);
  std::size_t seg = 0;
  for (int k = 0; k <= samples; ++k) {
    const double tau = tr.tau_start + kTwoPi * k / samples;
    while (seg + 1 < tr.last.size() && tau > tr.last[seg].t1) ++seg;
    const Eigen::VectorXd y = tr.last[seg].at(tau);
    os << tau << ',' << tr.last[seg].state_id;
    for (Eigen::Index i = 0; i < y.size(); ++i) os << ',' << y(i);
    os << '\n';
  }
}

/// Event rows `tau,from,to,<internal names>`.
inline void write_events_csv(std::ostream& os, const SystemDefinition& sys, const std::vector<OracleEvent>& events) {
  os << "tau,from,to";
  for (const auto& v : sys.internal) os << ',' << v;
  os << '\n';
  os.precision(17);
  for (const auto& e : events) {
    os << e.tau << ',' << e.from << ',' << e.to;
    for (double v : e.internal) os << ',' << v;
    os << '\n';
  }
}

}  // namespace hbevent
