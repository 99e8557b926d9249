#pragma once

// Periodic set of state transition instants for a given Fourier ansatz.
//
// Starting from a seed state at tau0, the next root of every admissible
// transition condition is computed, the earliest one is taken, internal
// variables are set on entry, and the loop repeats until a visit
// (state, tau mod 2 pi, internal variables) recurs one period later.

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "hbevent/roots.hpp"
#include "hbevent/series_eval.hpp"

namespace hbevent {

struct ScheduleSettings {
  double epsilon = 1e-8;     // periodicity tolerance (rad and internal-variable units)
  double strict_gap = 1e-8;  // roots closer than this to the entry instant are ignored
  /// A condition that vanishes at entry (e.g. a tangency) has its roots
  /// smeared by rounding; roots this close to such an entry are ignored.
  double entry_window = 1e-5;
  double entry_zero = 1e-7;  // |g(entry)| relative to max |G_n| counted as vanishing
  /// Beyond entry_window, roots of such a condition up to this distance must
  /// show a sign change under direct evaluation.
  double entry_check = 1e-3;
  double tie_tol = 1e-10;
  int max_transitions = 256;
  /// Total tau advance allowed before giving up, in periods.
  int max_periods = 4;
  /// Start of the loop; defaults to the maximum of the system's seed phase
  /// expression, or 0.
  std::optional<double> tau0;
  std::optional<int> seed_state;
  RootOptions roots;
};

struct ScheduleEntry {
  int state_id = 0;
  std::size_t state_index = 0;
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  std::vector<double> internal;
};

struct TransitionSchedule {
  std::vector<ScheduleEntry> entries;  // periodic part; tau_1^- in [0, 2 pi)
  int period_offset = 0;               // whole periods removed from the trace times
  bool converged = false;
  int iterations = 0;
  /// Every visited entry from the seed on, in absolute tau.
  std::vector<ScheduleEntry> trace;
  std::size_t period_begin = 0;

  std::size_t size() const { return entries.size(); }

  std::vector<int> state_sequence() const {
    std::vector<int> s;
    for (const auto& e : entries) s.push_back(e.state_id);
    return s;
  }
};

struct InitialState {
  int state_id = 0;
  std::size_t state_index = 0;
  std::vector<double> internal;
};

namespace detail {

inline std::vector<Jet> zero_internal(const SeriesContext& ctx) {
  return std::vector<Jet>(ctx.sys->internal.size(), ctx.constant(0.0));
}

inline std::vector<SeriesJet> zero_named(const SeriesContext& ctx) {
  return std::vector<SeriesJet>(ctx.sys->named().size(), ctx.zero_series());
}

/// Internal variables assumed when a state is entered without history: the
/// entry rules evaluated with zero previous internal variables and forces.
inline std::vector<Jet> initial_internal(const StateDefinition& st, const SeriesContext& ctx, const Jet& tau) {
  const auto& rules = st.initial_updates.empty() ? st.internal_updates : st.initial_updates;
  return apply_updates(rules, st, ctx, zero_internal(ctx), zero_named(ctx), tau);
}

inline std::vector<double> values(const std::vector<Jet>& v) {
  std::vector<double> r;
  r.reserve(v.size());
  for (const auto& j : v) r.push_back(j.val);
  return r;
}

inline bool region_holds(const StateDefinition& st, const SeriesContext& ctx, const std::vector<Jet>& v,
                         double tau) {
  auto named = eval_named(st, ctx, v);
  for (const auto& p : st.region) {
    double g = evaluate_real(eval_series(p.expr, ctx, v, named).val, tau);
    if (!compare(g, p.op)) return false;
  }
  return true;
}

inline double wrapped_distance(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d < 0) d += kTwoPi;
  return std::min(d, kTwoPi - d);
}

/// Location of the largest value of a real series over one period.
inline double argmax(const FourierSeries& s) {
  const FourierSeries ds = differentiate(s);
  if (ds.max_abs() < 1e-300) return 0.0;
  RootSet rs = find_roots(ds, 0.0);
  double best = 0.0, best_val = evaluate_real(s, 0.0);
  for (double r : rs.roots) {
    const double v = evaluate_real(s, r);
    if (v > best_val + 1e-14 * std::max(1.0, std::abs(best_val))) {
      best = r;
      best_val = v;
    }
  }
  return best;
}

}  // namespace detail

/// Start instant of the transition loop.
inline double seed_instant(const SeriesContext& ctx, const ScheduleSettings& s) {
  if (s.tau0) return *s.tau0;
  if (!ctx.sys->seed_phase) return 0.0;
  const FourierSeries p = eval_series(*ctx.sys->seed_phase, ctx, {}, {}).val;
  return detail::argmax(p);
}

/// State whose region contains y(tau). Ambiguous matches prefer the state
/// flagged default_entry, then the lowest index.
inline InitialState resolve_initial_state(const SeriesContext& ctx, double tau) {
  const auto& sys = *ctx.sys;
  std::optional<InitialState> best;
  bool best_default = false;
  const Jet t = ctx.constant(tau);
  for (std::size_t i = 0; i < sys.states.size(); ++i) {
    const auto& st = sys.states[i];
    if (st.region.empty() && !st.default_entry && sys.states.size() > 1) continue;
    std::vector<Jet> v;
    try {
      v = detail::initial_internal(st, ctx, t);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SignAmbiguity) continue;
      throw;
    }
    if (!detail::region_holds(st, ctx, v, tau)) continue;
    if (!best || (st.default_entry && !best_default)) {
      best = InitialState{st.id, i, detail::values(v)};
      best_default = st.default_entry;
    }
  }
  if (!best) throw Error(ErrorKind::StateResolutionFailure, "no state region contains y(" + std::to_string(tau) + ")");
  return *best;
}

inline InitialState resolve_initial_state(const SystemDefinition& sys, const std::vector<FourierSeries>& y,
                                          double tau, double omega = 1.0) {
  return resolve_initial_state(SeriesContext::values(sys, y, omega), tau);
}

namespace detail {

struct NextTransition {
  std::size_t successor_pos;
  int to;
  double tau;
};

/// Earliest admissible root of the conditions leaving `st` after tau.
inline std::optional<NextTransition> next_transition(const StateDefinition& st, const SeriesContext& ctx,
                                                     const std::vector<Jet>& v, const std::vector<SeriesJet>& named,
                                                     double tau, const ScheduleSettings& s) {
  std::optional<NextTransition> best;
  for (std::size_t pos = 0; pos < st.successors.size(); ++pos) {
    const Transition* tr = st.transition_to(st.successors[pos]);
    const FourierSeries g = eval_series(tr->condition, ctx, v, named).val;
    if (g.max_abs() < 1e-300) continue;
    RootSet rs = find_roots(g, tau, s.roots);
    std::vector<double> cand;
    for (double r : rs.roots) cand.push_back(r);
    for (double r : rs.roots) cand.push_back(r + kTwoPi);
    std::optional<FourierSeries> guard;
    if (tr->guard) guard = eval_series(tr->guard->expr, ctx, v, named).val;
    const bool zero_at_entry = std::abs(evaluate_real(g, tau)) <= s.entry_zero * g.max_abs();
    const double gap = zero_at_entry ? s.entry_window : s.strict_gap;
    for (std::size_t c = 0; c < cand.size(); ++c) {
      const double r = cand[c];
      if (r <= tau + gap) continue;
      if (r > tau + kTwoPi + s.strict_gap) break;
      const std::size_t ri = c % rs.roots.size();
      if (rs.grazing[ri] || (zero_at_entry && r < tau + s.entry_check)) {
        const double d = std::min(1e-6, 0.5 * (r - tau));
        if (evaluate_real(g, r - d) * evaluate_real(g, r + d) > 0.0) continue;  // touch without crossing
      }
      if (guard && !compare(evaluate_real(*guard, r), tr->guard->op)) continue;
      if (!best || r < best->tau - s.tie_tol) best = NextTransition{pos, st.successors[pos], r};
      break;
    }
  }
  return best;
}

}  // namespace detail

/// Runs the transition loop on a value-only context.
inline TransitionSchedule find_periodic_schedule(const SeriesContext& ctx, const ScheduleSettings& s = {}) {
  const auto& sys = *ctx.sys;
  TransitionSchedule out;
  const double tau0 = seed_instant(ctx, s);

  std::size_t k;
  std::vector<Jet> v;
  if (s.seed_state) {
    k = sys.state_index(*s.seed_state);
    v = detail::initial_internal(sys.states[k], ctx, ctx.constant(tau0));
  } else {
    InitialState init = resolve_initial_state(ctx, tau0);
    k = init.state_index;
    v = detail::initial_internal(sys.states[k], ctx, ctx.constant(tau0));
  }

  double tau = tau0;
  auto finish = [&](std::size_t begin) {
    out.period_begin = begin;
    const double shift = std::floor(out.trace[begin].tau_minus / kTwoPi);
    out.period_offset = static_cast<int>(shift);
    for (std::size_t i = begin; i < out.trace.size(); ++i) {
      ScheduleEntry e = out.trace[i];
      e.tau_minus -= shift * kTwoPi;
      e.tau_plus -= shift * kTwoPi;
      out.entries.push_back(e);
    }
    out.entries.back().tau_plus = out.entries.front().tau_minus + kTwoPi;
    out.trace.back().tau_plus = out.trace[begin].tau_minus + kTwoPi;
    out.converged = true;
  };

  for (int it = 0; it < s.max_transitions; ++it) {
    out.iterations = it + 1;
    const auto& st = sys.states[k];
    auto named = eval_named(st, ctx, v);
    auto next = detail::next_transition(st, ctx, v, named, tau, s);
    if (!next) {
      out.trace.push_back({st.id, k, tau, tau + kTwoPi, detail::values(v)});
      finish(out.trace.size() - 1);
      return out;
    }
    out.trace.push_back({st.id, k, tau, next->tau, detail::values(v)});

    const std::size_t l = sys.state_index(next->to);
    std::vector<Jet> vnext = eval_internal_updates(sys.states[l], ctx, v, named, ctx.constant(next->tau));
    const auto vvals = detail::values(vnext);

    for (std::size_t i = 0; i < out.trace.size(); ++i) {
      const auto& e = out.trace[i];
      if (e.state_index != l) continue;
      if (detail::wrapped_distance(e.tau_minus, next->tau) > s.epsilon) continue;
      double vmax = 1.0, vdiff = 0.0;
      for (std::size_t q = 0; q < vvals.size(); ++q) {
        vmax = std::max(vmax, std::abs(vvals[q]));
        vdiff = std::max(vdiff, std::abs(vvals[q] - e.internal[q]));
      }
      if (vdiff > s.epsilon * vmax) continue;
      const long periods = std::lround((next->tau - e.tau_minus) / kTwoPi);
      if (periods != 1)
        throw Error(ErrorKind::NoConvergence,
                    "transition sequence repeats after " + std::to_string(periods) + " periods");
      finish(i);
      return out;
    }

    k = l;
    v = std::move(vnext);
    tau = next->tau;
    if (tau - tau0 > s.max_periods * kTwoPi)
      throw Error(ErrorKind::NoConvergence, "no periodic transition schedule within " +
                                                std::to_string(s.max_periods) + " periods");
  }
  throw Error(ErrorKind::NoConvergence,
              "no periodic transition schedule after " + std::to_string(s.max_transitions) + " transitions");
}

inline TransitionSchedule find_periodic_schedule(const SystemDefinition& sys, const std::vector<FourierSeries>& y,
                                                 double omega, const ScheduleSettings& s = {}) {
  return find_periodic_schedule(SeriesContext::values(sys, y, omega), s);
}

/// Largest jump |f_k(tau) - f_l(tau)| of the dynamics over all transitions of
/// the periodic part, relative to the largest dynamics value.
inline double continuity_defect(const SeriesContext& ctx, const TransitionSchedule& sched) {
  const auto& sys = *ctx.sys;
  double worst = 0.0;
  const std::size_t J = sched.entries.size();
  if (J < 2) return 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    const auto& a = sched.entries[j];
    const auto& b = sched.entries[(j + 1) % J];
    std::vector<Jet> va, vb;
    for (double x : a.internal) va.push_back(ctx.constant(x));
    for (double x : b.internal) vb.push_back(ctx.constant(x));
    const auto& sa = sys.states[a.state_index];
    const auto& sb = sys.states[b.state_index];
    auto fa = eval_dynamics(sa, ctx, va, eval_named(sa, ctx, va));
    auto fb = eval_dynamics(sb, ctx, vb, eval_named(sb, ctx, vb));
    for (std::size_t c = 0; c < fa.size(); ++c) {
      const double x = evaluate_real(fa[c].val, a.tau_plus);
      const double y = evaluate_real(fb[c].val, a.tau_plus);
      const double scale = std::max({1.0, std::abs(x), std::abs(y)});
      worst = std::max(worst, std::abs(x - y) / scale);
    }
  }
  return worst;
}

/// CSV rows `state,tau_minus,tau_plus,v...`.
inline void write_schedule_csv(std::ostream& os, const TransitionSchedule& s, const SystemDefinition& sys) {
  os << "state,tau_minus,tau_plus";
  for (const auto& n : sys.internal) os << ',' << n;
  os << '\n';
  os.precision(17);
  for (const auto& e : s.entries) {
    os << e.state_id << ',' << e.tau_minus << ',' << e.tau_plus;
    for (double x : e.internal) os << ',' << x;
    os << '\n';
  }
}

}  // namespace hbevent
