#pragma once

// First- and second-order derivatives of force coefficients, transition
// instants and solutions with respect to arbitrary scalar variables
// (Fourier coefficients, Omega, system parameters).

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "hbevent/hbm.hpp"
#include "hbevent/linalg.hpp"

namespace hbevent {

/// A scalar variable given by its direction in the primal space.
struct SensitivityVariable {
  std::string label;
  Eigen::VectorXd direction;
};

inline SensitivityVariable unknown_variable(const HBProblem& p, std::size_t i) {
  SensitivityVariable v;
  v.direction = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.primal_size()));
  v.direction(static_cast<Eigen::Index>(p.primal_of_unknown(i))) = 1.0;
  if (i >= p.n_y()) {
    v.label = "Omega";
    return v;
  }
  const std::size_t c = i / p.block(), r = i % p.block();
  const int n = static_cast<int>((r + 1) / 2);
  v.label = std::string(r == 0 || r % 2 == 1 ? "Re" : "Im") + " Y" + std::to_string(n) + "[" + p.sys.components[c] + "]";
  return v;
}

/// Real or imaginary part of harmonic n of a component.
inline SensitivityVariable coefficient_variable(const HBProblem& p, std::size_t component, int n, bool imag = false) {
  if (n < 0 || n > p.H || (imag && n == 0)) throw Error(ErrorKind::InvalidArgument, "harmonic index out of range");
  return unknown_variable(p, imag ? p.im_index(component, n) : p.re_index(component, n));
}

inline SensitivityVariable omega_variable(const HBProblem& p) {
  SensitivityVariable v{"Omega", Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.primal_size()))};
  v.direction(static_cast<Eigen::Index>(p.omega_slot())) = 1.0;
  return v;
}

inline SensitivityVariable parameter_variable(const HBProblem& p, const std::string& name) {
  const int i = p.sys.parameter_index(name);
  if (i < 0) throw Error(ErrorKind::UnboundSymbol, "unknown parameter '" + name + "'");
  SensitivityVariable v{name, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.primal_size()))};
  v.direction(static_cast<Eigen::Index>(p.param_slot(static_cast<std::size_t>(i)))) = 1.0;
  return v;
}

inline Eigen::MatrixXd seed_matrix(const HBProblem& p, const std::vector<SensitivityVariable>& vars) {
  Eigen::MatrixXd W(static_cast<Eigen::Index>(p.primal_size()), static_cast<Eigen::Index>(vars.size()));
  for (std::size_t a = 0; a < vars.size(); ++a) {
    if (vars[a].direction.size() != W.rows())
      throw Error(ErrorKind::InvalidArgument, "variable '" + vars[a].label + "' has the wrong dimension");
    W.col(static_cast<Eigen::Index>(a)) = vars[a].direction;
  }
  return W;
}

/// Derivatives of F_n (n = 0..H) and of the transition instants.
struct SensitivityBundle {
  std::vector<std::string> labels;
  JetShape shape;
  std::vector<std::vector<ComplexJet>> force;  // [component][n]
  std::vector<EntryJets> entries;              // one per schedule entry of the period
  TransitionSchedule schedule;

  std::size_t size() const { return labels.size(); }
  cplx value(std::size_t c, int n) const { return force[c][static_cast<std::size_t>(n)].val; }
  cplx first(std::size_t c, int n, std::size_t a) const { return force[c][static_cast<std::size_t>(n)].d[a]; }
  cplx second(std::size_t c, int n, std::size_t a, std::size_t b) const {
    return force[c][static_cast<std::size_t>(n)].dd[pair_index(a, b, shape.directions)];
  }
  /// Derivative of the instant ending entry j (its tau+).
  double dtau(std::size_t j, std::size_t a) const { return entries[j].tau_plus.d[a]; }
  double d2tau(std::size_t j, std::size_t a, std::size_t b) const {
    return entries[j].tau_plus.dd[pair_index(a, b, shape.directions)];
  }
};

inline SensitivityBundle force_sensitivities(const HBProblem& p, const Eigen::VectorXd& u,
                                             const std::vector<SensitivityVariable>& vars, int order,
                                             const TransitionSchedule* schedule = nullptr) {
  if (order < 1 || order > 2) throw Error(ErrorKind::InvalidArgument, "sensitivity order must be 1 or 2");
  auto jets = evaluate_residual_jets(p, u, seed_matrix(p, vars), order, schedule);
  SensitivityBundle b;
  for (const auto& v : vars) b.labels.push_back(v.label);
  b.shape = jets.shape;
  b.force = std::move(jets.force);
  b.entries = std::move(jets.entries);
  b.schedule = std::move(jets.schedule);
  return b;
}

inline SensitivityBundle dF(const HBProblem& p, const Eigen::VectorXd& u, const std::vector<SensitivityVariable>& vars,
                            const TransitionSchedule* schedule = nullptr) {
  return force_sensitivities(p, u, vars, 1, schedule);
}

inline SensitivityBundle d2F(const HBProblem& p, const Eigen::VectorXd& u, const std::vector<SensitivityVariable>& vars,
                             const TransitionSchedule* schedule = nullptr) {
  return force_sensitivities(p, u, vars, 2, schedule);
}

/// Second-order Taylor coefficients of a scalar.
struct ScalarTaylor {
  double value = 0.0, first = 0.0, second = 0.0;

  double predict(double dp) const { return value + first * dp + 0.5 * second * dp * dp; }
};

/// u(p0 + dp) ~ u0 + du dp + d2u dp^2 / 2.
struct TaylorExpansion {
  std::string parameter;
  double p0 = 0.0;
  Eigen::VectorXd u0, du, d2u;

  Eigen::VectorXd predict(double dp) const { return u0 + du * dp + 0.5 * d2u * (dp * dp); }
};

namespace detail {

/// Rows appended to the residual so the expansion is well posed: autonomous
/// problems keep the harmonic-1 amplitude of the anchor fixed.
inline Eigen::MatrixXd taylor_constraints(const HBProblem& p) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p.autonomous ? 1 : 0, static_cast<Eigen::Index>(p.n_unknowns()));
  if (p.autonomous) C(0, static_cast<Eigen::Index>(p.re_index(static_cast<std::size_t>(p.anchor_component), 1))) = 1.0;
  return C;
}

}  // namespace detail

/// Solution derivatives from R(u(p), p) = 0: J du = -R_p and
/// J d2u = -D2R[w, w] with w = (du, 1).
inline TaylorExpansion taylor_expand_solution(const HBProblem& p, const Eigen::VectorXd& u,
                                              const std::string& parameter) {
  const auto pv = parameter_variable(p, parameter);
  const auto N = static_cast<Eigen::Index>(p.n_unknowns());
  const Eigen::MatrixXd C = detail::taylor_constraints(p);

  Eigen::MatrixXd W(static_cast<Eigen::Index>(p.primal_size()), N + 1);
  W.leftCols(N) = unknown_seeds(p);
  W.col(N) = pv.direction;
  auto first = evaluate_residual_jets(p, u, W, 1);
  const Eigen::MatrixXd D = first_derivatives(first.equations);

  Eigen::MatrixXd J(D.rows() + C.rows(), N);
  J << D.leftCols(N), C;
  Eigen::VectorXd rp = Eigen::VectorXd::Zero(J.rows());
  rp.head(D.rows()) = D.col(N);

  TaylorExpansion t;
  t.parameter = parameter;
  t.p0 = p.sys.parameters[static_cast<std::size_t>(p.sys.parameter_index(parameter))].second;
  t.u0 = u;
  t.du = solve_full_rank(J, Eigen::VectorXd(-rp));

  // second derivative along the single direction w
  Eigen::MatrixXd w = W.leftCols(N) * t.du + pv.direction;
  auto second = evaluate_residual_jets(p, u, w, 2, &first.schedule);
  Eigen::VectorXd r2 = Eigen::VectorXd::Zero(J.rows());
  for (std::size_t i = 0; i < second.equations.size(); ++i) r2(static_cast<Eigen::Index>(i)) = second.equations[i].dd[0];
  t.d2u = solve_full_rank(J, Eigen::VectorXd(-r2));
  return t;
}

/// Amplitude 2|Y_n| of a component along the expansion.
inline ScalarTaylor harmonic_amplitude_taylor(const HBProblem& p, const TaylorExpansion& t, std::size_t component,
                                              int n = 1) {
  const auto ir = static_cast<Eigen::Index>(p.re_index(component, n));
  const auto ii = static_cast<Eigen::Index>(p.im_index(component, n));
  const double a = t.u0(ir), b = t.u0(ii);
  const double r = std::hypot(a, b);
  ScalarTaylor s;
  s.value = 2.0 * r;
  if (r == 0.0) return s;
  const double da = t.du(ir), db = t.du(ii);
  // gradient 2 (a, b) / r, Hessian 2 (b^2, -ab; -ab, a^2) / r^3
  s.first = 2.0 * (a * da + b * db) / r;
  const double quad = 2.0 * (b * b * da * da - 2.0 * a * b * da * db + a * a * db * db) / (r * r * r);
  s.second = quad + 2.0 * (a * t.d2u(ir) + b * t.d2u(ii)) / r;
  return s;
}

/// Harmonic amplitude 2|Y_n| of a component (|Y_0| for n = 0).
inline double harmonic_amplitude(const HBProblem& p, const Eigen::VectorXd& u, std::size_t component, int n = 1) {
  const double re = u(static_cast<Eigen::Index>(p.re_index(component, n)));
  if (n == 0) return std::abs(re);
  return 2.0 * std::hypot(re, u(static_cast<Eigen::Index>(p.im_index(component, n))));
}

/// Rows `quantity,index,n,a,b,re,im`; quantity is dF, d2F, dtau or d2tau,
/// index a component name (forces) or schedule entry (instants).
inline void write_sensitivity_csv(std::ostream& os, const HBProblem& p, const SensitivityBundle& b) {
  os << "quantity,index,n,a,b,re,im\n";
  os.precision(17);
  const std::size_t k = b.size();
  const bool second = b.shape.order >= 2;
  for (std::size_t c = 0; c < b.force.size(); ++c)
    for (int n = 0; n <= p.H; ++n) {
      for (std::size_t a = 0; a < k; ++a) {
        const cplx v = b.first(c, n, a);
        os << "dF," << p.sys.components[c] << ',' << n << ',' << b.labels[a] << ",," << v.real() << ',' << v.imag()
           << '\n';
      }
      if (second)
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t q = a; q < k; ++q) {
            const cplx v = b.second(c, n, a, q);
            os << "d2F," << p.sys.components[c] << ',' << n << ',' << b.labels[a] << ',' << b.labels[q] << ','
               << v.real() << ',' << v.imag() << '\n';
          }
    }
  for (std::size_t j = 0; j < b.entries.size(); ++j) {
    for (std::size_t a = 0; a < k; ++a) os << "dtau," << j << ",," << b.labels[a] << ",," << b.dtau(j, a) << ",0\n";
    if (second)
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t q = a; q < k; ++q)
          os << "d2tau," << j << ",," << b.labels[a] << ',' << b.labels[q] << ',' << b.d2tau(j, a, q) << ",0\n";
  }
}

}  // namespace hbevent
