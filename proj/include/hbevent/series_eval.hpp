#pragma once

// Evaluation of state expressions over Fourier series (with derivatives).

#include <vector>

#include "hbevent/jet.hpp"
#include "hbevent/state_model.hpp"

namespace hbevent {

/// Everything an expression may reference, as series or scalar jets.
struct SeriesContext {
  const SystemDefinition* sys = nullptr;
  std::vector<SeriesJet> y;  // one per component, real series
  Jet omega;
  std::vector<Jet> params;
  JetShape shape;

  /// Plain-value context (no derivatives).
  static SeriesContext values(const SystemDefinition& sys, const std::vector<FourierSeries>& y, double omega) {
    SeriesContext c;
    c.sys = &sys;
    c.shape = {0, 0};
    for (const auto& s : y) c.y.emplace_back(s, c.shape);
    c.omega = Jet(omega, c.shape);
    for (const auto& [n, v] : sys.parameters) c.params.emplace_back(v, c.shape);
    return c;
  }

  Jet constant(double v) const { return Jet(v, shape); }
  SeriesJet zero_series() const { return SeriesJet(FourierSeries(), shape); }
};

namespace detail {

inline bool has_derivatives(const Jet& j) {
  for (double x : j.d)
    if (x != 0.0) return true;
  for (double x : j.dd)
    if (x != 0.0) return true;
  return false;
}

inline SeriesJet series_power(const SeriesJet& s, int e) {
  SeriesJet r = s;
  for (int i = 1; i < e; ++i) r = r * s;
  return r;
}

inline SeriesJet scaled(const Jet& c, const SeriesJet& s) {
  if (!has_derivatives(c)) {
    SeriesJet r = s;
    r *= c.val;
    return r;
  }
  return SeriesJet::constant(c) * s;
}

}  // namespace detail

/// Series of a polynomial expression. `v` are the internal variables and
/// `named` the already evaluated named expressions of the active state.
inline SeriesJet eval_series(const PolynomialExpr& e, const SeriesContext& ctx, const std::vector<Jet>& v,
                             const std::vector<SeriesJet>& named) {
  SeriesJet acc = ctx.zero_series();
  for (const auto& t : e.terms) {
    if (t.coeff == 0.0) continue;
    Jet scalar = ctx.constant(t.coeff);
    bool scalar_active = false;
    const SeriesJet* first_ref = nullptr;
    SeriesJet prod;
    bool have_prod = false;
    auto take = [&](SeriesJet&& s) {
      if (!have_prod && !first_ref) {
        prod = std::move(s);
        have_prod = true;
      } else {
        if (!have_prod) {
          prod = *first_ref;
          have_prod = true;
          first_ref = nullptr;
        }
        prod = prod * s;
      }
    };
    for (const auto& f : t.factors) {
      switch (f.kind) {
        case FactorKind::Parameter:
          scalar = scalar * pow(ctx.params.at(static_cast<std::size_t>(f.index)), f.exponent);
          scalar_active = true;
          break;
        case FactorKind::Internal:
          scalar = scalar * pow(v.at(static_cast<std::size_t>(f.index)), f.exponent);
          scalar_active = true;
          break;
        case FactorKind::Component:
        case FactorKind::Named: {
          const SeriesJet& base = f.kind == FactorKind::Component ? ctx.y.at(static_cast<std::size_t>(f.index))
                                                                  : named.at(static_cast<std::size_t>(f.index));
          if (f.dot) {
            SeriesJet db = detail::scaled(ctx.omega, differentiate(base));
            take(detail::series_power(db, f.exponent));
          } else if (f.exponent == 1 && !have_prod && !first_ref) {
            first_ref = &base;
          } else if (f.exponent == 1) {
            take(SeriesJet(base));
          } else {
            take(detail::series_power(base, f.exponent));
          }
          break;
        }
        case FactorKind::Cos:
        case FactorKind::Sin: {
          SeriesJet h(f.kind == FactorKind::Cos ? FourierSeries::cosine() : FourierSeries::sine(), ctx.shape);
          for (auto& x : h.d) x = FourierSeries();
          for (auto& x : h.dd) x = FourierSeries();
          take(detail::series_power(h, f.exponent));
          break;
        }
        case FactorKind::Unresolved:
          throw Error(ErrorKind::UnboundSymbol, "unresolved symbol '" + f.symbol + "' (system not finalized)");
      }
    }
    const SeriesJet* series = have_prod ? &prod : first_ref;
    if (!series) {
      acc += SeriesJet::constant(scalar);
    } else if (!scalar_active || !detail::has_derivatives(scalar)) {
      acc.add_scaled(scalar.val, *series);
    } else {
      acc += SeriesJet::constant(scalar) * *series;
    }
  }
  return acc;
}

/// Named expressions of a state, evaluated in order.
inline std::vector<SeriesJet> eval_named(const StateDefinition& st, const SeriesContext& ctx,
                                         const std::vector<Jet>& v) {
  std::vector<SeriesJet> named;
  named.reserve(st.named.size());
  for (const auto& [n, e] : st.named) named.push_back(eval_series(e, ctx, v, named));
  return named;
}

inline std::vector<SeriesJet> eval_dynamics(const StateDefinition& st, const SeriesContext& ctx,
                                            const std::vector<Jet>& v, const std::vector<SeriesJet>& named) {
  std::vector<SeriesJet> out;
  out.reserve(st.dynamics.size());
  for (const auto& e : st.dynamics) out.push_back(eval_series(e, ctx, v, named));
  return out;
}

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

/// Internal variables on entering `next` at instant tau, from the previous
/// state's internal variables and named expressions. Rules apply in order,
/// each seeing the assignments made before it.
inline std::vector<Jet> apply_updates(const std::vector<InternalUpdate>& rules, const StateDefinition& next,
                                      const SeriesContext& ctx, const std::vector<Jet>& prev_v,
                                      const std::vector<SeriesJet>& prev_named, const Jet& tau) {
  std::vector<Jet> v = prev_v;
  for (const auto& rule : rules) {
    const auto idx = static_cast<std::size_t>(rule.index);
    if (rule.kind == InternalUpdate::Kind::Expression) {
      v[idx] = evaluate(eval_series(rule.expr, ctx, v, prev_named), tau);
      continue;
    }
    auto sign_from = [&](const PolynomialExpr& e) -> int {
      SeriesJet s = eval_series(e, ctx, v, prev_named);
      int sg = sign_of(evaluate_real(s.val, tau.val));
      if (sg == 0) sg = sign_of(evaluate_real(differentiate(s.val), tau.val));
      return sg;
    };
    int sg = sign_from(rule.expr);
    if (sg == 0 && rule.fallback) sg = sign_from(*rule.fallback);
    if (sg == 0)
      throw Error(ErrorKind::SignAmbiguity,
                  "sign rule for '" + rule.target + "' in state " + std::to_string(next.id) + " is undetermined");
    v[idx] = ctx.constant(static_cast<double>(sg));
  }
  return v;
}

inline std::vector<Jet> eval_internal_updates(const StateDefinition& next, const SeriesContext& ctx,
                                              const std::vector<Jet>& prev_v,
                                              const std::vector<SeriesJet>& prev_named, const Jet& tau) {
  return apply_updates(next.internal_updates, next, ctx, prev_v, prev_named, tau);
}

}  // namespace hbevent
