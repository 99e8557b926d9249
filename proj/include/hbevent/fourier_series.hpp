#pragma once

// Truncated Fourier series in normalized time tau:
//   a(tau) = sum_{n=-H..H} A_n exp(i n tau)
// stored densely over n = -H..H.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "hbevent/errors.hpp"

namespace hbevent {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class FourierSeries {
 public:
  FourierSeries() : order_(0), coeffs_(1, cplx{0.0, 0.0}), real_(true) {}

  /// Zero series of the given order.
  explicit FourierSeries(int order, bool real = true)
      : order_(order), coeffs_(2 * static_cast<std::size_t>(order) + 1, cplx{0.0, 0.0}), real_(real) {
    if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative harmonic order");
  }

  static FourierSeries constant(double c) {
    FourierSeries s;
    s.coeffs_[0] = c;
    return s;
  }

  /// Coefficients ordered n = -H..H; size must be odd.
  static FourierSeries from_coefficients(std::vector<cplx> coeffs, bool real) {
    if (coeffs.empty() || coeffs.size() % 2 == 0)
      throw Error(ErrorKind::InvalidArgument, "coefficient vector must have odd length");
    FourierSeries s;
    s.order_ = static_cast<int>(coeffs.size() / 2);
    s.coeffs_ = std::move(coeffs);
    s.real_ = real;
    if (real) s.symmetrize();
    return s;
  }

  /// Real series amp*exp(i n tau) + conj(amp)*exp(-i n tau); n = 0 uses Re(amp).
  static FourierSeries harmonic(int n, cplx amp) {
    FourierSeries s(std::abs(n));
    s.set_harmonic(n, amp);
    return s;
  }

  static FourierSeries cosine(int n = 1, double amp = 1.0) { return harmonic(n, cplx{amp / 2.0, 0.0}); }
  static FourierSeries sine(int n = 1, double amp = 1.0) { return harmonic(n, cplx{0.0, -amp / 2.0}); }

  int order() const noexcept { return order_; }
  bool is_real() const noexcept { return real_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  cplx operator[](int n) const noexcept {
    return (n < -order_ || n > order_) ? cplx{0.0, 0.0} : coeffs_[static_cast<std::size_t>(n + order_)];
  }

  std::span<const cplx> coefficients() const noexcept { return coeffs_; }
  std::span<cplx> mutable_coefficients() noexcept { return coeffs_; }

  /// Sets A_n; for real series A_{-n} follows by conjugation.
  void set_harmonic(int n, cplx value) {
    if (std::abs(n) > order_) grow(std::abs(n));
    if (real_) {
      if (n == 0) {
        coeffs_[static_cast<std::size_t>(order_)] = cplx{value.real(), 0.0};
        return;
      }
      coeffs_[static_cast<std::size_t>(order_ + n)] = value;
      coeffs_[static_cast<std::size_t>(order_ - n)] = std::conj(value);
    } else {
      coeffs_[static_cast<std::size_t>(order_ + n)] = value;
    }
  }

  void mark_complex() noexcept { real_ = false; }

  bool is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{0.0, 0.0}; });
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (auto c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  double sum_abs() const noexcept {
    double m = 0.0;
    for (auto c : coeffs_) m += std::abs(c);
    return m;
  }

  /// Pads with zero coefficients up to order h (no-op if already larger).
  void grow(int h) {
    if (h <= order_) return;
    const auto pad = static_cast<std::size_t>(h - order_);
    coeffs_.insert(coeffs_.begin(), pad, cplx{0.0, 0.0});
    coeffs_.insert(coeffs_.end(), pad, cplx{0.0, 0.0});
    order_ = h;
  }

  /// Enforce A_{-n} = conj(A_n) by averaging.
  void symmetrize() {
    for (int n = 0; n <= order_; ++n) {
      cplx& p = coeffs_[static_cast<std::size_t>(order_ + n)];
      cplx& m = coeffs_[static_cast<std::size_t>(order_ - n)];
      cplx avg = 0.5 * (p + std::conj(m));
      if (n == 0) avg = cplx{avg.real(), 0.0};
      p = avg;
      m = std::conj(avg);
    }
    real_ = true;
  }

  FourierSeries& operator+=(const FourierSeries& o) {
    if (o.order_ > order_) grow(o.order_);
    const int off = order_ - o.order_;
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k + static_cast<std::size_t>(off)] += o.coeffs_[k];
    real_ = real_ && o.real_;
    return *this;
  }

  FourierSeries& operator-=(const FourierSeries& o) {
    if (o.order_ > order_) grow(o.order_);
    const int off = order_ - o.order_;
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k + static_cast<std::size_t>(off)] -= o.coeffs_[k];
    real_ = real_ && o.real_;
    return *this;
  }

  FourierSeries& operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  /// this += s * o
  void add_scaled(double s, const FourierSeries& o) {
    if (s == 0.0) return;
    if (o.order_ > order_) grow(o.order_);
    const int off = order_ - o.order_;
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k + static_cast<std::size_t>(off)] += s * o.coeffs_[k];
    real_ = real_ && o.real_;
  }

 private:
  int order_;
  std::vector<cplx> coeffs_;
  bool real_;
};

inline FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
inline FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
inline FourierSeries operator*(double s, FourierSeries a) { return a *= s; }
inline FourierSeries operator-(FourierSeries a) { return a *= -1.0; }

inline FourierSeries add(const FourierSeries& a, const FourierSeries& b) { return a + b; }

/// Full convolution; result order is H_a + H_b.
inline FourierSeries multiply(const FourierSeries& a, const FourierSeries& b) {
  const int ha = a.order(), hb = b.order();
  FourierSeries r(ha + hb, a.is_real() && b.is_real());
  if (a.is_zero() || b.is_zero()) return r;
  auto ca = a.coefficients();
  auto cb = b.coefficients();
  auto cr = r.mutable_coefficients();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const cplx ai = ca[i];
    if (ai == cplx{0.0, 0.0}) continue;
    for (std::size_t j = 0; j < cb.size(); ++j) cr[i + j] += ai * cb[j];
  }
  return r;
}

inline FourierSeries operator*(const FourierSeries& a, const FourierSeries& b) { return multiply(a, b); }

inline FourierSeries power(const FourierSeries& a, int p) {
  if (p < 0) throw Error(ErrorKind::InvalidArgument, "negative power of a Fourier series");
  FourierSeries r = FourierSeries::constant(1.0);
  for (int k = 0; k < p; ++k) r = multiply(r, a);
  return r;
}

/// Derivative with respect to tau: A_n -> i n A_n.
inline FourierSeries differentiate(FourierSeries a) {
  const int h = a.order();
  auto c = a.mutable_coefficients();
  for (int n = -h; n <= h; ++n) c[static_cast<std::size_t>(n + h)] *= cplx{0.0, static_cast<double>(n)};
  return a;
}

/// Keeps harmonics |n| <= h.
inline FourierSeries truncate(const FourierSeries& a, int h) {
  if (h >= a.order()) return a;
  FourierSeries r(h, a.is_real());
  auto c = r.mutable_coefficients();
  for (int n = -h; n <= h; ++n) c[static_cast<std::size_t>(n + h)] = a[n];
  return r;
}

inline cplx evaluate(const FourierSeries& a, double tau) {
  const int h = a.order();
  auto c = a.coefficients();
  cplx sum = c[static_cast<std::size_t>(h)];
  if (h == 0) return sum;
  const cplx w = std::polar(1.0, tau);
  cplx wn = w;
  for (int n = 1; n <= h; ++n) {
    sum += c[static_cast<std::size_t>(h + n)] * wn + c[static_cast<std::size_t>(h - n)] * std::conj(wn);
    // re-anchor periodically to limit drift of the rotation recurrence
    wn = (n % 16 == 15) ? std::polar(1.0, (n + 1) * tau) : wn * w;
  }
  return sum;
}

/// Real part of the evaluation; the meaningful value for real series.
inline double evaluate_real(const FourierSeries& a, double tau) { return evaluate(a, tau).real(); }

/// Precomputed weights W_k = int_{t0}^{t1} exp(i k tau) dtau for |k| <= kmax.
class IntervalKernel {
 public:
  IntervalKernel(double t0, double t1, int kmax) : kmax_(kmax), w_(2 * static_cast<std::size_t>(kmax) + 1) {
    const double d = t1 - t0;
    const double mid = 0.5 * (t0 + t1);
    for (int k = -kmax; k <= kmax; ++k) {
      cplx v;
      if (k == 0) {
        v = d;
      } else {
        // (e^{ik t1} - e^{ik t0}) / (ik) = e^{ik mid} * 2 sin(k d / 2) / k
        v = std::polar(2.0 * std::sin(0.5 * k * d) / k, k * mid);
      }
      w_[static_cast<std::size_t>(k + kmax)] = v;
    }
  }

  int kmax() const noexcept { return kmax_; }
  cplx operator()(int k) const noexcept { return w_[static_cast<std::size_t>(k + kmax_)]; }

  /// int_{t0}^{t1} a(tau) exp(-i n tau) dtau; requires |n| + order(a) <= kmax.
  cplx integrate(const FourierSeries& a, int n) const {
    const int h = a.order();
    auto c = a.coefficients();
    cplx s{0.0, 0.0};
    for (int m = -h; m <= h; ++m) {
      const cplx am = c[static_cast<std::size_t>(m + h)];
      if (am == cplx{0.0, 0.0}) continue;
      s += (*this)(m - n) * am;
    }
    return s;
  }

 private:
  int kmax_;
  std::vector<cplx> w_;
};

/// int_{t0}^{t1} a(tau) exp(-i n tau) dtau, evaluated in closed form.
inline cplx definite_integral(const FourierSeries& a, int n, double t0, double t1) {
  IntervalKernel k(t0, t1, a.order() + std::abs(n));
  return k.integrate(a, n);
}

}  // namespace hbevent
