#pragma once

// Zeros of a real truncated Fourier series on one period.
//
// With z = exp(i tau), z^H a(tau) is a polynomial of degree 2H whose roots on
// the unit circle are the real zeros of a. Roots come from the eigenvalues of
// the companion matrix and are then polished by safeguarded Newton steps on
// a(tau) itself.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hbevent/fourier_series.hpp"

namespace hbevent {

struct RootOptions {
  double unit_circle_tol = 1e-8;
  /// Candidates up to this distance from the unit circle are accepted only if
  /// the polished root shows a sign change.
  double candidate_circle_tol = 1e-4;
  double root_tol = 1e-10;  // relative to max |A_n|
  double dedup_tol = 1e-9;
  double grazing_tol = 1e-7;  // relative to max |n A_n|
  double trim_tol = 1e-14;    // leading coefficients below this (relative) are dropped
};

struct RootSet {
  std::vector<double> roots;  // strictly increasing in [tau0, tau0 + 2 pi)
  std::vector<int> multiplicity;
  std::vector<double> residual;
  std::vector<bool> grazing;

  std::size_t size() const noexcept { return roots.size(); }
  bool empty() const noexcept { return roots.empty(); }
};

namespace detail {

inline double wrap_into(double tau, double tau0) {
  double t = std::fmod(tau - tau0, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return tau0 + t;
}

inline void eval_with_derivative(const FourierSeries& a, double tau, double& value, double& slope) {
  const int h = a.order();
  auto c = a.coefficients();
  double v = c[static_cast<std::size_t>(h)].real();
  double s = 0.0;
  for (int n = 1; n <= h; ++n) {
    const cplx e = std::polar(1.0, n * tau);
    const cplx t = c[static_cast<std::size_t>(h + n)] * e;
    v += 2.0 * t.real();
    s -= 2.0 * n * t.imag();
  }
  value = v;
  slope = s;
}

/// Newton on a(tau) with step limit and monotone residual decrease.
inline double polish_root(const FourierSeries& a, double tau, double scale, int max_steps = 8) {
  double v, s;
  eval_with_derivative(a, tau, v, s);
  for (int it = 0; it < max_steps; ++it) {
    if (std::abs(v) <= 1e-16 * scale || s == 0.0) break;
    double step = -v / s;
    step = std::clamp(step, -1e-3, 1e-3);
    bool accepted = false;
    for (int half = 0; half < 6; ++half) {
      double v2, s2;
      eval_with_derivative(a, tau + step, v2, s2);
      if (std::abs(v2) < std::abs(v)) {
        tau += step;
        v = v2;
        s = s2;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return tau;
}

}  // namespace detail

/// All real zeros of a in [tau0, tau0 + 2 pi).
inline RootSet find_roots(const FourierSeries& a, double tau0 = 0.0, const RootOptions& opt = {}) {
  if (!a.is_real()) throw Error(ErrorKind::InvalidArgument, "root finding requires a real series");
  const double scale = a.max_abs();
  if (scale < 1e-300) throw Error(ErrorKind::DegenerateSeries, "series is identically zero");

  int h = a.order();
  while (h > 0 && std::abs(a[h]) <= opt.trim_tol * scale) --h;

  RootSet out;
  if (h == 0) return out;

  const int deg = 2 * h;
  const cplx lead = a[h];
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int k = 0; k < deg; ++k) comp(k, deg - 1) = -a[k - h] / lead;
  // the companion matrix is already upper Hessenberg
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(deg);
  schur.computeFromHessenberg(comp, comp, false);
  if (schur.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "companion eigenvalue solver failed");
  const Eigen::VectorXcd ev = schur.matrixT().diagonal();

  double deriv_scale = 0.0;
  for (int n = 1; n <= h; ++n) deriv_scale = std::max(deriv_scale, n * std::abs(a[n]));

  struct Cand {
    double tau;
    double res;
    bool graze;
  };
  std::vector<Cand> cands;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double dist = std::abs(std::abs(ev(i)) - 1.0);
    if (dist > opt.candidate_circle_tol) continue;
    double tau = detail::polish_root(a, std::arg(ev(i)), scale);
    double v, s;
    detail::eval_with_derivative(a, tau, v, s);
    if (dist > opt.unit_circle_tol) {
      const double d = 1e-7;
      const double lo = evaluate_real(a, tau - d), hi = evaluate_real(a, tau + d);
      if (!(lo * hi < 0.0)) continue;
    }
    if (std::abs(v) > opt.root_tol * scale) continue;
    cands.push_back({detail::wrap_into(tau, tau0), std::abs(v), std::abs(s) < opt.grazing_tol * deriv_scale});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.tau < y.tau; });

  for (const auto& c : cands) {
    if (!out.roots.empty()) {
      double gap = c.tau - out.roots.back();
      if (gap <= opt.dedup_tol) {
        out.multiplicity.back() += 1;
        if (c.res < out.residual.back()) {
          out.roots.back() = c.tau;
          out.residual.back() = c.res;
        }
        out.grazing.back() = out.grazing.back() || c.graze;
        continue;
      }
    }
    out.roots.push_back(c.tau);
    out.multiplicity.push_back(1);
    out.residual.push_back(c.res);
    out.grazing.push_back(c.graze);
  }
  // a root just below tau0 + 2 pi duplicates one at tau0
  if (out.roots.size() >= 2 && out.roots.back() - out.roots.front() >= kTwoPi - opt.dedup_tol) {
    out.multiplicity.front() += out.multiplicity.back();
    out.roots.pop_back();
    out.multiplicity.pop_back();
    out.residual.pop_back();
    out.grazing.pop_back();
  }
  return out;
}

/// Smallest root strictly later than tau + strict_gap (looking up to one full period ahead).
inline std::optional<double> next_root_after(const FourierSeries& a, double tau, double strict_gap = 1e-8,
                                             const RootOptions& opt = {}) {
  RootSet rs = find_roots(a, tau, opt);
  for (double r : rs.roots)
    if (r > tau + strict_gap) return r;
  for (double r : rs.roots)
    if (r + kTwoPi > tau + strict_gap) return r + kTwoPi;
  return std::nullopt;
}

}  // namespace hbevent
