#pragma once

// Forward-mode value-plus-derivative arithmetic up to second order.
//
// A Jet carries a scalar value, its first derivatives along k seeded
// directions and (optionally) the packed upper triangle of the k x k second
// derivative matrix. SeriesJet is the same construction with FourierSeries
// entries, so the series operations used by the state machine propagate
// derivatives without a separate code path.

#include <cassert>
#include <vector>

#include "hbevent/fourier_series.hpp"

namespace hbevent {

/// Index of (i, j), i <= j, in a packed upper triangle of a k x k matrix.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k) {
  if (i > j) std::swap(i, j);
  return i * k - i * (i + 1) / 2 + j;
}

inline std::size_t pair_count(std::size_t k) { return k * (k + 1) / 2; }

struct JetShape {
  std::size_t directions = 0;
  int order = 0;  // 0, 1 or 2

  std::size_t first_size() const { return order >= 1 ? directions : 0; }
  std::size_t second_size() const { return order >= 2 ? pair_count(directions) : 0; }
};

struct Jet {
  double val = 0.0;
  std::vector<double> d;
  std::vector<double> dd;

  Jet() = default;
  Jet(double v, const JetShape& s) : val(v), d(s.first_size(), 0.0), dd(s.second_size(), 0.0) {}

  static Jet variable(double v, const JetShape& s, std::size_t dir) {
    Jet j(v, s);
    if (dir < j.d.size()) j.d[dir] = 1.0;
    return j;
  }

  std::size_t k() const { return d.size(); }
  bool second() const { return !dd.empty(); }
  JetShape shape() const { return {d.size(), dd.empty() ? (d.empty() ? 0 : 1) : 2}; }
};

inline Jet operator+(Jet a, const Jet& b) {
  a.val += b.val;
  for (std::size_t i = 0; i < a.d.size(); ++i) a.d[i] += b.d[i];
  for (std::size_t i = 0; i < a.dd.size(); ++i) a.dd[i] += b.dd[i];
  return a;
}

inline Jet operator-(Jet a, const Jet& b) {
  a.val -= b.val;
  for (std::size_t i = 0; i < a.d.size(); ++i) a.d[i] -= b.d[i];
  for (std::size_t i = 0; i < a.dd.size(); ++i) a.dd[i] -= b.dd[i];
  return a;
}

inline Jet operator*(double s, Jet a) {
  a.val *= s;
  for (auto& x : a.d) x *= s;
  for (auto& x : a.dd) x *= s;
  return a;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r = a;
  r.val = a.val * b.val;
  const std::size_t k = a.d.size();
  for (std::size_t i = 0; i < k; ++i) r.d[i] = a.d[i] * b.val + a.val * b.d[i];
  if (!a.dd.empty()) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const std::size_t p = pair_index(i, j, k);
        r.dd[p] = a.dd[p] * b.val + a.val * b.dd[p] + a.d[i] * b.d[j] + a.d[j] * b.d[i];
      }
  }
  return r;
}

/// Applies a scalar function with value f0, slope f1 and curvature f2 at a.val.
inline Jet chain(const Jet& a, double f0, double f1, double f2) {
  Jet r = a;
  r.val = f0;
  const std::size_t k = a.d.size();
  for (std::size_t i = 0; i < k; ++i) r.d[i] = f1 * a.d[i];
  if (!a.dd.empty()) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const std::size_t p = pair_index(i, j, k);
        r.dd[p] = f1 * a.dd[p] + f2 * a.d[i] * a.d[j];
      }
  }
  return r;
}

inline Jet reciprocal(const Jet& a) {
  if (a.val == 0.0) throw Error(ErrorKind::InvalidArgument, "division by zero in jet arithmetic");
  const double inv = 1.0 / a.val;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet pow(const Jet& a, int p) {
  if (p == 0) return Jet(1.0, a.shape());
  if (p < 0) return pow(reciprocal(a), -p);
  const double f0 = std::pow(a.val, p);
  const double f1 = p * std::pow(a.val, p - 1);
  const double f2 = p >= 2 ? p * (p - 1) * std::pow(a.val, p - 2) : 0.0;
  return chain(a, f0, f1, f2);
}

struct SeriesJet {
  FourierSeries val;
  std::vector<FourierSeries> d;
  std::vector<FourierSeries> dd;

  SeriesJet() = default;
  SeriesJet(FourierSeries v, const JetShape& s) : val(std::move(v)), d(s.first_size()), dd(s.second_size()) {}

  static SeriesJet constant(const Jet& c) {
    SeriesJet r;
    r.val = FourierSeries::constant(c.val);
    r.d.reserve(c.d.size());
    for (double x : c.d) r.d.push_back(FourierSeries::constant(x));
    r.dd.reserve(c.dd.size());
    for (double x : c.dd) r.dd.push_back(FourierSeries::constant(x));
    return r;
  }

  std::size_t k() const { return d.size(); }
  JetShape shape() const { return {d.size(), dd.empty() ? (d.empty() ? 0 : 1) : 2}; }

  SeriesJet& operator+=(const SeriesJet& o) {
    val += o.val;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!o.d[i].is_zero()) d[i] += o.d[i];
    for (std::size_t i = 0; i < dd.size(); ++i)
      if (!o.dd[i].is_zero()) dd[i] += o.dd[i];
    return *this;
  }

  void add_scaled(double s, const SeriesJet& o) {
    val.add_scaled(s, o.val);
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!o.d[i].is_zero()) d[i].add_scaled(s, o.d[i]);
    for (std::size_t i = 0; i < dd.size(); ++i)
      if (!o.dd[i].is_zero()) dd[i].add_scaled(s, o.dd[i]);
  }

  SeriesJet& operator*=(double s) {
    val *= s;
    for (auto& x : d) x *= s;
    for (auto& x : dd) x *= s;
    return *this;
  }
};

inline SeriesJet operator+(SeriesJet a, const SeriesJet& b) { return a += b; }
inline SeriesJet operator-(SeriesJet a, const SeriesJet& b) {
  a.add_scaled(-1.0, b);
  return a;
}
inline SeriesJet operator*(double s, SeriesJet a) { return a *= s; }

namespace detail {
inline void accumulate_product(FourierSeries& acc, const FourierSeries& a, const FourierSeries& b) {
  if (a.is_zero() || b.is_zero()) return;
  acc += multiply(a, b);
}
}  // namespace detail

inline SeriesJet operator*(const SeriesJet& a, const SeriesJet& b) {
  SeriesJet r;
  r.val = multiply(a.val, b.val);
  const std::size_t k = a.d.size();
  r.d.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    detail::accumulate_product(r.d[i], a.d[i], b.val);
    detail::accumulate_product(r.d[i], a.val, b.d[i]);
  }
  if (!a.dd.empty()) {
    r.dd.resize(a.dd.size());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const std::size_t p = pair_index(i, j, k);
        detail::accumulate_product(r.dd[p], a.dd[p], b.val);
        detail::accumulate_product(r.dd[p], a.val, b.dd[p]);
        detail::accumulate_product(r.dd[p], a.d[i], b.d[j]);
        detail::accumulate_product(r.dd[p], a.d[j], b.d[i]);
      }
  }
  return r;
}

inline SeriesJet differentiate(const SeriesJet& a) {
  SeriesJet r;
  r.val = differentiate(a.val);
  r.d.reserve(a.d.size());
  for (const auto& x : a.d) r.d.push_back(x.is_zero() ? FourierSeries() : differentiate(x));
  r.dd.reserve(a.dd.size());
  for (const auto& x : a.dd) r.dd.push_back(x.is_zero() ? FourierSeries() : differentiate(x));
  return r;
}

inline SeriesJet truncate(const SeriesJet& a, int h) {
  SeriesJet r;
  r.val = truncate(a.val, h);
  for (const auto& x : a.d) r.d.push_back(truncate(x, h));
  for (const auto& x : a.dd) r.dd.push_back(truncate(x, h));
  return r;
}

/// Value of a real series jet at a jet-valued instant:
/// d/da [s(t)] = s_a(t) + s'(t) t_a, and the corresponding second-order terms.
inline Jet evaluate(const SeriesJet& s, const Jet& t) {
  const std::size_t k = s.d.size();
  Jet r(evaluate_real(s.val, t.val), s.shape());
  if (k == 0) return r;
  const FourierSeries ds = differentiate(s.val);
  const double slope = evaluate_real(ds, t.val);
  std::vector<double> sa(k), sa_slope;
  for (std::size_t i = 0; i < k; ++i) {
    sa[i] = s.d[i].is_zero() ? 0.0 : evaluate_real(s.d[i], t.val);
    r.d[i] = sa[i] + slope * t.d[i];
  }
  if (!s.dd.empty()) {
    const double curv = evaluate_real(differentiate(ds), t.val);
    sa_slope.resize(k);
    for (std::size_t i = 0; i < k; ++i) sa_slope[i] = s.d[i].is_zero() ? 0.0 : evaluate_real(differentiate(s.d[i]), t.val);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const std::size_t p = pair_index(i, j, k);
        const double sij = s.dd[p].is_zero() ? 0.0 : evaluate_real(s.dd[p], t.val);
        r.dd[p] = sij + sa_slope[i] * t.d[j] + sa_slope[j] * t.d[i] + curv * t.d[i] * t.d[j] + slope * t.dd[p];
      }
  }
  return r;
}

}  // namespace hbevent
