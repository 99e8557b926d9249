#pragma once

// Harmonic balance residual R_n = i n Omega Y_n - F_n with
//   F_n = 1/(2 pi) sum_j int_{tau_j^-}^{tau_j^+} f_{k_j}(y, tau) exp(-i n tau) dtau
// evaluated in closed form over the periodic transition schedule.
//
// Derivatives: every primal scalar (unknown coefficients, Omega, parameters)
// can be seeded through a matrix W whose columns are derivative directions.
// Transition instants are differentiated implicitly through their condition
// g(tau; psi) = 0 and enter the integrals through the Leibniz boundary terms.

#include <Eigen/Dense>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hbevent/scheduler.hpp"

namespace hbevent {

struct HBSettings {
  ScheduleSettings schedule;
  double regularity_tol = 1e-8;  // |dg/dtau| relative to max |n G_n|
  /// Drop all transition-instant derivatives (diagnostic).
  bool freeze_transition_times = false;
};

/// Unknown layout: for each component a block [Re Y0, Re Y1, Im Y1, ..., Re YH, Im YH];
/// autonomous problems append Omega. Primal space for derivatives:
/// [unknowns; Omega (forced problems only); parameters].
struct HBProblem {
  SystemDefinition sys;
  int H = 5;
  double omega = 1.0;  // fixed excitation frequency (forced problems)
  bool autonomous = false;
  int anchor_component = 0;
  bool phase_anchor = true;  // autonomous: append Im Y_1 = 0 of the anchor component
  HBSettings settings;

  std::size_t dim() const { return sys.dimension(); }
  std::size_t block() const { return 2 * static_cast<std::size_t>(H) + 1; }
  std::size_t n_y() const { return dim() * block(); }
  std::size_t n_unknowns() const { return n_y() + (autonomous ? 1 : 0); }
  std::size_t n_equations() const { return n_y() + (autonomous && phase_anchor ? 1 : 0); }
  std::size_t omega_slot() const { return n_y(); }
  std::size_t param_slot(std::size_t i) const { return n_y() + 1 + i; }
  std::size_t primal_size() const { return n_y() + 1 + sys.parameters.size(); }

  /// Row of Re Y_n (n >= 0) or Im Y_n (n >= 1) of component c.
  std::size_t re_index(std::size_t c, int n) const { return c * block() + (n == 0 ? 0 : 2 * n - 1); }
  std::size_t im_index(std::size_t c, int n) const { return c * block() + 2 * n; }

  double omega_of(const Eigen::VectorXd& u) const { return autonomous ? u(static_cast<Eigen::Index>(n_y())) : omega; }

  /// Full primal vector for unknowns u.
  Eigen::VectorXd primal(const Eigen::VectorXd& u) const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(primal_size()));
    p.head(static_cast<Eigen::Index>(n_y())) = u.head(static_cast<Eigen::Index>(n_y()));
    p(static_cast<Eigen::Index>(omega_slot())) = omega_of(u);
    for (std::size_t i = 0; i < sys.parameters.size(); ++i)
      p(static_cast<Eigen::Index>(param_slot(i))) = sys.parameters[i].second;
    return p;
  }

  /// Maps an unknown index to its primal index.
  std::size_t primal_of_unknown(std::size_t i) const { return i < n_y() ? i : omega_slot(); }
};

inline std::vector<FourierSeries> unpack_series(const HBProblem& p, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) < p.n_y())
    throw Error(ErrorKind::InvalidArgument, "unknown vector too short");
  std::vector<FourierSeries> y;
  for (std::size_t c = 0; c < p.dim(); ++c) {
    FourierSeries s(p.H);
    s.set_harmonic(0, u(static_cast<Eigen::Index>(p.re_index(c, 0))));
    for (int n = 1; n <= p.H; ++n)
      s.set_harmonic(n, cplx{u(static_cast<Eigen::Index>(p.re_index(c, n))), u(static_cast<Eigen::Index>(p.im_index(c, n)))});
    y.push_back(std::move(s));
  }
  return y;
}

inline Eigen::VectorXd pack_series(const HBProblem& p, const std::vector<FourierSeries>& y, double omega = 0.0) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.n_unknowns()));
  for (std::size_t c = 0; c < p.dim() && c < y.size(); ++c) {
    u(static_cast<Eigen::Index>(p.re_index(c, 0))) = y[c][0].real();
    for (int n = 1; n <= p.H; ++n) {
      u(static_cast<Eigen::Index>(p.re_index(c, n))) = y[c][n].real();
      u(static_cast<Eigen::Index>(p.im_index(c, n))) = y[c][n].imag();
    }
  }
  if (p.autonomous) u(static_cast<Eigen::Index>(p.n_y())) = omega;
  return u;
}

struct ComplexJet {
  cplx val{0.0, 0.0};
  std::vector<cplx> d;
  std::vector<cplx> dd;

  ComplexJet() = default;
  explicit ComplexJet(const JetShape& s) : d(s.first_size()), dd(s.second_size()) {}

  ComplexJet& operator+=(const ComplexJet& o) {
    val += o.val;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += o.d[i];
    for (std::size_t i = 0; i < dd.size(); ++i) dd[i] += o.dd[i];
    return *this;
  }
};

/// One entry of the periodic schedule with differentiated instants.
struct EntryJets {
  int state_id = 0;
  Jet tau_minus, tau_plus;
  std::vector<Jet> internal;
};

struct ResidualJets {
  JetShape shape;
  std::vector<Jet> equations;                 // n_equations
  std::vector<std::vector<ComplexJet>> force;  // [component][n], n = 0..H
  std::vector<EntryJets> entries;             // periodic part
  TransitionSchedule schedule;
};

namespace detail {

inline SeriesContext jet_context(const HBProblem& p, const Eigen::VectorXd& u, const Eigen::MatrixXd& W, int order) {
  SeriesContext ctx;
  ctx.sys = &p.sys;
  const auto k = static_cast<std::size_t>(W.cols());
  ctx.shape = {k, order};
  const Eigen::VectorXd x = p.primal(u);
  auto scalar = [&](std::size_t slot) {
    Jet j(x(static_cast<Eigen::Index>(slot)), ctx.shape);
    for (std::size_t a = 0; a < j.d.size(); ++a) j.d[a] = W(static_cast<Eigen::Index>(slot), static_cast<Eigen::Index>(a));
    return j;
  };
  const auto y = unpack_series(p, u);
  for (std::size_t c = 0; c < p.dim(); ++c) {
    SeriesJet s(y[c], ctx.shape);
    for (std::size_t a = 0; a < s.d.size(); ++a) {
      const auto col = static_cast<Eigen::Index>(a);
      const auto b0 = static_cast<Eigen::Index>(c * p.block());
      if (W.block(b0, col, static_cast<Eigen::Index>(p.block()), 1).isZero(0.0)) continue;
      Eigen::VectorXd dir = W.col(col);
      s.d[a] = unpack_series(p, dir)[c];
    }
    for (auto& x2 : s.dd) x2 = FourierSeries();
    ctx.y.push_back(std::move(s));
  }
  ctx.omega = scalar(p.omega_slot());
  for (std::size_t i = 0; i < p.sys.parameters.size(); ++i) ctx.params.push_back(scalar(p.param_slot(i)));
  return ctx;
}

/// Root of the condition series g at tau_value, with derivatives by the
/// implicit function theorem.
inline Jet transition_instant(const SeriesJet& g, double tau_value, const JetShape& shape, double regularity_tol,
                              bool freeze) {
  Jet t(tau_value, shape);
  if (freeze || shape.order == 0) return t;
  const FourierSeries gt_series = differentiate(g.val);
  const double gt = evaluate_real(gt_series, tau_value);
  double scale = 0.0;
  for (int n = 1; n <= g.val.order(); ++n) scale = std::max(scale, n * std::abs(g.val[n]));
  if (!(std::abs(gt) >= regularity_tol * scale) || gt == 0.0)
    throw Error(ErrorKind::GrazingTransition,
                "transition condition crosses zero tangentially at tau = " + std::to_string(tau_value));
  const std::size_t k = shape.directions;
  std::vector<double> ga(k), gta(k);
  for (std::size_t a = 0; a < k; ++a) {
    ga[a] = g.d[a].is_zero() ? 0.0 : evaluate_real(g.d[a], tau_value);
    t.d[a] = -ga[a] / gt;
  }
  if (shape.order >= 2) {
    const double gtt = evaluate_real(differentiate(gt_series), tau_value);
    for (std::size_t a = 0; a < k; ++a) gta[a] = g.d[a].is_zero() ? 0.0 : evaluate_real(differentiate(g.d[a]), tau_value);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        const std::size_t pidx = pair_index(a, b, k);
        const double gab = g.dd[pidx].is_zero() ? 0.0 : evaluate_real(g.dd[pidx], tau_value);
        t.dd[pidx] = -(gab + gta[a] * t.d[b] + gta[b] * t.d[a] + gtt * t.d[a] * t.d[b]) / gt;
      }
  }
  return t;
}

/// Adds int_{t0}^{t1} f exp(-i n tau) dtau (with derivatives) to acc[n] for n = 0..H.
inline void accumulate_integrals(std::vector<ComplexJet>& acc, const SeriesJet& f, const Jet& t0, const Jet& t1,
                                 int H) {
  const std::size_t k = f.d.size();
  const bool second = !f.dd.empty();
  int order = f.val.order();
  for (const auto& s : f.d) order = std::max(order, s.order());
  for (const auto& s : f.dd) order = std::max(order, s.order());
  const IntervalKernel kernel(t0.val, t1.val, order + H);

  bool moving = false;
  for (std::size_t a = 0; a < k; ++a) moving = moving || t0.d[a] != 0.0 || t1.d[a] != 0.0;
  if (second)
    for (std::size_t pidx = 0; pidx < t0.dd.size(); ++pidx) moving = moving || t0.dd[pidx] != 0.0 || t1.dd[pidx] != 0.0;

  // endpoint data
  struct Endpoint {
    const Jet* t;
    double sign;
    cplx a, ap;            // f and f' at the endpoint
    std::vector<cplx> aa;  // f_a at the endpoint
  };
  std::vector<Endpoint> ends;
  if (moving) {
    const FourierSeries fp = differentiate(f.val);
    for (auto [t, sign] : {std::pair{&t1, 1.0}, std::pair{&t0, -1.0}}) {
      Endpoint e{t, sign, evaluate(f.val, t->val), second ? evaluate(fp, t->val) : cplx{}, {}};
      e.aa.resize(k);
      for (std::size_t a = 0; a < k; ++a) e.aa[a] = f.d[a].is_zero() ? cplx{} : evaluate(f.d[a], t->val);
      ends.push_back(std::move(e));
    }
  }

  for (int n = 0; n <= H; ++n) {
    ComplexJet& r = acc[static_cast<std::size_t>(n)];
    r.val += kernel.integrate(f.val, n);
    for (std::size_t a = 0; a < k; ++a)
      if (!f.d[a].is_zero()) r.d[a] += kernel.integrate(f.d[a], n);
    if (second)
      for (std::size_t pidx = 0; pidx < f.dd.size(); ++pidx)
        if (!f.dd[pidx].is_zero()) r.dd[pidx] += kernel.integrate(f.dd[pidx], n);
    for (const auto& e : ends) {
      const Jet& t = *e.t;
      const cplx w = std::polar(1.0, -n * t.val);
      for (std::size_t a = 0; a < k; ++a) r.d[a] += e.sign * w * e.a * t.d[a];
      if (!second) continue;
      const cplx hp = e.ap - cplx{0.0, static_cast<double>(n)} * e.a;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
          const std::size_t pidx = pair_index(a, b, k);
          r.dd[pidx] += e.sign * w *
                        (e.aa[a] * t.d[b] + e.aa[b] * t.d[a] + hp * t.d[a] * t.d[b] + e.a * t.dd[pidx]);
        }
    }
  }
}

}  // namespace detail

/// Residual equations with derivatives along the columns of W (rows: primal
/// space). `order` is 0, 1 or 2. An existing schedule may be passed to skip
/// the transition loop (it must belong to the same point).
inline ResidualJets evaluate_residual_jets(const HBProblem& p, const Eigen::VectorXd& u, const Eigen::MatrixXd& W,
                                           int order, const TransitionSchedule* reuse = nullptr) {
  if (static_cast<std::size_t>(W.rows()) != p.primal_size())
    throw Error(ErrorKind::InvalidArgument, "seed matrix rows must match the primal space");
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!std::isfinite(u(i))) throw Error(ErrorKind::InvalidArgument, "non-finite unknown");
  const SeriesContext ctx = detail::jet_context(p, u, W, order);
  const JetShape shape = ctx.shape;
  const auto& sys = p.sys;

  ResidualJets out;
  out.shape = shape;
  if (reuse) {
    out.schedule = *reuse;
  } else {
    SeriesContext vctx = SeriesContext::values(sys, {}, ctx.omega.val);
    for (const auto& s : ctx.y) vctx.y.emplace_back(s.val, vctx.shape);
    out.schedule = find_periodic_schedule(vctx, p.settings.schedule);
  }
  const auto& trace = out.schedule.trace;
  const bool freeze = p.settings.freeze_transition_times;

  out.force.assign(p.dim(), std::vector<ComplexJet>(static_cast<std::size_t>(p.H) + 1, ComplexJet(shape)));

  // replay the whole trace so internal variables carry their derivatives
  const double tau0 = trace.front().tau_minus;
  std::vector<Jet> v = detail::initial_internal(sys.states[trace.front().state_index], ctx, ctx.constant(tau0));
  Jet t_minus = ctx.constant(tau0);
  Jet t_begin;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& e = trace[i];
    const auto& st = sys.states[e.state_index];
    if (i == out.schedule.period_begin) t_begin = t_minus;
    const auto named = eval_named(st, ctx, v);

    Jet t_plus;
    std::vector<Jet> v_next;
    if (i + 1 < trace.size()) {
      const auto& nx = trace[i + 1];
      const Transition* tr = st.transition_to(nx.state_id);
      if (!tr) throw Error(ErrorKind::ScheduleFailure, "schedule uses an undefined transition");
      const SeriesJet g = eval_series(tr->condition, ctx, v, named);
      t_plus = detail::transition_instant(g, e.tau_plus, shape, p.settings.regularity_tol, freeze);
      v_next = eval_internal_updates(sys.states[nx.state_index], ctx, v, named, t_plus);
    } else {
      t_plus = t_begin;
      t_plus.val += kTwoPi;
    }

    if (i >= out.schedule.period_begin) {
      const auto dyn = eval_dynamics(st, ctx, v, named);
      for (std::size_t c = 0; c < p.dim(); ++c) detail::accumulate_integrals(out.force[c], dyn[c], t_minus, t_plus, p.H);
      out.entries.push_back({st.id, t_minus, t_plus, v});
    }
    t_minus = std::move(t_plus);
    v = std::move(v_next);
  }

  const double inv = 1.0 / kTwoPi;
  for (auto& comp : out.force)
    for (auto& F : comp) {
      F.val *= inv;
      for (auto& x : F.d) x *= inv;
      for (auto& x : F.dd) x *= inv;
    }

  // R_n = i n Omega Y_n - F_n, packed as [Re R0, Re R1, Im R1, ...]
  out.equations.assign(p.n_equations(), Jet(0.0, shape));
  const Jet& om = ctx.omega;
  for (std::size_t c = 0; c < p.dim(); ++c) {
    const SeriesJet& y = ctx.y[c];
    for (int n = 0; n <= p.H; ++n) {
      const ComplexJet& F = out.force[c][static_cast<std::size_t>(n)];
      // i n Omega Y_n = n Omega (-Im Y_n) + i n Omega Re Y_n
      ComplexJet lhs(shape);
      if (n > 0) {
        auto coef = [&](const FourierSeries& s) { return s[n]; };
        const cplx yn = coef(y.val);
        lhs.val = cplx{0.0, n * om.val} * yn;
        for (std::size_t a = 0; a < shape.first_size(); ++a) {
          const cplx ya = y.d[a][n];
          lhs.d[a] = cplx{0.0, static_cast<double>(n)} * (om.d[a] * yn + om.val * ya);
        }
        for (std::size_t a = 0; a < shape.first_size() && shape.order >= 2; ++a)
          for (std::size_t b = a; b < shape.first_size(); ++b) {
            const std::size_t pidx = pair_index(a, b, shape.directions);
            lhs.dd[pidx] = cplx{0.0, static_cast<double>(n)} *
                           (om.dd[pidx] * yn + om.d[a] * y.d[b][n] + om.d[b] * y.d[a][n]);
          }
      }
      Jet re(lhs.val.real() - F.val.real(), shape), im(lhs.val.imag() - F.val.imag(), shape);
      for (std::size_t a = 0; a < re.d.size(); ++a) {
        re.d[a] = lhs.d[a].real() - F.d[a].real();
        im.d[a] = lhs.d[a].imag() - F.d[a].imag();
      }
      for (std::size_t q = 0; q < re.dd.size(); ++q) {
        re.dd[q] = lhs.dd[q].real() - F.dd[q].real();
        im.dd[q] = lhs.dd[q].imag() - F.dd[q].imag();
      }
      out.equations[p.re_index(c, n)] = std::move(re);
      if (n > 0) out.equations[p.im_index(c, n)] = std::move(im);
    }
  }
  if (p.autonomous && p.phase_anchor) {
    // phase anchor: Im Y_1 of the anchor component vanishes
    const auto row = static_cast<Eigen::Index>(p.im_index(static_cast<std::size_t>(p.anchor_component), 1));
    Jet a(u(row), shape);
    for (std::size_t d = 0; d < a.d.size(); ++d) a.d[d] = W(row, static_cast<Eigen::Index>(d));
    out.equations[p.n_y()] = std::move(a);
  }
  return out;
}

struct HBResidual {
  Eigen::VectorXd values;
  TransitionSchedule schedule;
  double norm = 0.0;
  bool valid = false;
  std::string error;
};

inline Eigen::VectorXd values_of(const std::vector<Jet>& eq) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(eq.size()));
  for (std::size_t i = 0; i < eq.size(); ++i) r(static_cast<Eigen::Index>(i)) = eq[i].val;
  return r;
}

/// Residual value; schedule failures mark the result invalid instead of throwing.
inline HBResidual residual(const HBProblem& p, const Eigen::VectorXd& u) {
  HBResidual r;
  try {
    auto jets = evaluate_residual_jets(p, u, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.primal_size()), 0), 0);
    r.values = values_of(jets.equations);
    r.schedule = std::move(jets.schedule);
    r.norm = r.values.norm();
    r.valid = std::isfinite(r.norm);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::NoConvergence:
      case ErrorKind::StateResolutionFailure:
      case ErrorKind::SignAmbiguity:
      case ErrorKind::DegenerateSeries:
      case ErrorKind::ScheduleFailure:
      case ErrorKind::GrazingTransition:
        r.valid = false;
        r.error = e.what();
        break;
      default:
        throw;
    }
  }
  return r;
}

/// Seed matrix selecting unknowns (and, for forced problems, Omega when
/// with_omega is set) as derivative directions.
inline Eigen::MatrixXd unknown_seeds(const HBProblem& p, bool with_omega = false) {
  const auto n = p.n_unknowns() + (with_omega && !p.autonomous ? 1 : 0);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.primal_size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < p.n_unknowns(); ++i)
    W(static_cast<Eigen::Index>(p.primal_of_unknown(i)), static_cast<Eigen::Index>(i)) = 1.0;
  if (with_omega && !p.autonomous) W(static_cast<Eigen::Index>(p.omega_slot()), static_cast<Eigen::Index>(n - 1)) = 1.0;
  return W;
}

inline Eigen::MatrixXd first_derivatives(const std::vector<Jet>& eq) {
  const std::size_t k = eq.empty() ? 0 : eq[0].d.size();
  Eigen::MatrixXd J(static_cast<Eigen::Index>(eq.size()), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < eq.size(); ++i)
    for (std::size_t a = 0; a < k; ++a) J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = eq[i].d[a];
  return J;
}

/// Residual and analytic Jacobian with respect to the unknowns.
inline std::pair<HBResidual, Eigen::MatrixXd> residual_and_jacobian(const HBProblem& p, const Eigen::VectorXd& u,
                                                                     bool with_omega = false) {
  auto jets = evaluate_residual_jets(p, u, unknown_seeds(p, with_omega), 1);
  HBResidual r;
  r.values = values_of(jets.equations);
  r.norm = r.values.norm();
  r.valid = true;
  r.schedule = std::move(jets.schedule);
  return {std::move(r), first_derivatives(jets.equations)};
}

/// F_n, n = -H..H, of every component for a given schedule (computed when absent).
inline std::vector<FourierSeries> force_coefficients(const SystemDefinition& sys, const std::vector<FourierSeries>& y,
                                                     double omega, int H, const TransitionSchedule* schedule = nullptr,
                                                     const ScheduleSettings& settings = {}) {
  HBProblem p;
  p.sys = sys;
  p.H = H;
  p.omega = omega;
  p.settings.schedule = settings;
  std::vector<FourierSeries> yt;
  for (const auto& s : y) yt.push_back(truncate(s, H));
  const Eigen::VectorXd u = pack_series(p, yt);
  auto jets = evaluate_residual_jets(p, u, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.primal_size()), 0), 0,
                                     schedule);
  std::vector<FourierSeries> F;
  for (const auto& comp : jets.force) {
    FourierSeries s(H);
    for (int n = 0; n <= H; ++n) s.set_harmonic(n, comp[static_cast<std::size_t>(n)].val);
    F.push_back(std::move(s));
  }
  return F;
}

/// CSV rows `component,n,re,im` for n = 0..H.
inline void write_force_csv(std::ostream& os, const SystemDefinition& sys, const std::vector<FourierSeries>& F) {
  os << "component,n,re,im\n";
  os.precision(17);
  for (std::size_t c = 0; c < F.size(); ++c)
    for (int n = 0; n <= F[c].order(); ++n)
      os << sys.components[c] << ',' << n << ',' << F[c][n].real() << ',' << F[c][n].imag() << '\n';
}

}  // namespace hbevent
