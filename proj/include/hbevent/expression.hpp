#pragma once

// Polynomial expressions over the symbols of a system with distinct states.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "hbevent/errors.hpp"

namespace hbevent {

enum class FactorKind { Unresolved, Component, Internal, Parameter, Named, Cos, Sin };

/// One factor of a term, raised to `exponent`. `dot` requests the time
/// derivative of the symbol (only components and named expressions).
struct Factor {
  std::string symbol;
  int exponent = 1;
  bool dot = false;
  FactorKind kind = FactorKind::Unresolved;
  int index = -1;

  Factor() = default;
  Factor(std::string s, int e = 1, bool d = false) : symbol(std::move(s)), exponent(e), dot(d) {}

  bool operator==(const Factor& o) const { return symbol == o.symbol && exponent == o.exponent && dot == o.dot; }
};

struct Term {
  double coeff = 1.0;
  std::vector<Factor> factors;

  bool operator==(const Term& o) const { return coeff == o.coeff && factors == o.factors; }
};

struct PolynomialExpr {
  std::vector<Term> terms;

  PolynomialExpr() = default;
  PolynomialExpr(std::initializer_list<Term> t) : terms(t) {}

  static PolynomialExpr constant(double c) { return PolynomialExpr{Term{c, {}}}; }
  static PolynomialExpr symbol(const std::string& s, double c = 1.0, int e = 1) {
    return PolynomialExpr{Term{c, {Factor(s, e)}}};
  }

  bool empty() const { return terms.empty(); }

  /// Degree in the series-valued factors (components, named, explicit harmonics).
  int degree() const {
    int deg = 0;
    for (const auto& t : terms) {
      int d = 0;
      for (const auto& f : t.factors)
        if (f.kind != FactorKind::Parameter && f.kind != FactorKind::Internal) d += f.exponent;
      deg = std::max(deg, d);
    }
    return deg;
  }

  bool operator==(const PolynomialExpr& o) const { return terms == o.terms; }
};

// Small builders for writing element definitions in code.

inline PolynomialExpr operator+(PolynomialExpr a, const PolynomialExpr& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a;
}

inline PolynomialExpr operator*(double s, PolynomialExpr a) {
  for (auto& t : a.terms) t.coeff *= s;
  return a;
}

inline PolynomialExpr operator-(const PolynomialExpr& a, const PolynomialExpr& b) { return a + (-1.0) * b; }

inline PolynomialExpr operator*(const PolynomialExpr& a, const PolynomialExpr& b) {
  PolynomialExpr r;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      Term t{ta.coeff * tb.coeff, ta.factors};
      for (const auto& f : tb.factors) {
        bool merged = false;
        for (auto& g : t.factors)
          if (g.symbol == f.symbol && g.dot == f.dot) {
            g.exponent += f.exponent;
            merged = true;
            break;
          }
        if (!merged) t.factors.push_back(f);
      }
      r.terms.push_back(std::move(t));
    }
  return r;
}

inline PolynomialExpr dot(const std::string& s) { return PolynomialExpr{Term{1.0, {Factor(s, 1, true)}}}; }

/// Evaluates a polynomial over any value type V.
///   factor(f) returns the value of f raised to f.exponent,
///   add_scaled(acc, c, x) performs acc += c * x,
///   mul(x, y) returns the product.
template <class V, class FactorFn, class AddScaledFn, class MulFn>
V evaluate_polynomial(const PolynomialExpr& e, V zero, FactorFn&& factor, AddScaledFn&& add_scaled, MulFn&& mul,
                      const V& one) {
  V acc = std::move(zero);
  for (const auto& t : e.terms) {
    if (t.coeff == 0.0) continue;
    if (t.factors.empty()) {
      add_scaled(acc, t.coeff, one);
      continue;
    }
    if (t.factors.size() == 1) {
      add_scaled(acc, t.coeff, factor(t.factors[0]));
      continue;
    }
    V prod = factor(t.factors[0]);
    for (std::size_t i = 1; i < t.factors.size(); ++i) prod = mul(prod, factor(t.factors[i]));
    add_scaled(acc, t.coeff, prod);
  }
  return acc;
}

}  // namespace hbevent
