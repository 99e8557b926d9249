#pragma once

// First-order form of a mechanical system with one attached nonlinear element:
//   y = [x; xd],  y' = [xd; -M^-1 (D xd + K x + fe + fnl)]
// with fe = -eps p cos(tau), i.e. an applied force eps p cos(Omega t).

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbevent/elements.hpp"

namespace hbevent {

struct MechanicalHost {
  Eigen::MatrixXd M, D, K;

  std::size_t dofs() const { return static_cast<std::size_t>(M.rows()); }
};

struct Excitation {
  std::vector<double> pattern;  // per DOF
  double amplitude = 1.0;
  std::string parameter = "eps";
};

struct Attachment {
  SystemDefinition element;
  std::vector<int> dofs;  // host DOF of each element coordinate
};

/// M = I, D = 0, K = [[2, -1], [-1, 2]].
inline MechanicalHost two_dof_host() {
  MechanicalHost h;
  h.M = Eigen::MatrixXd::Identity(2, 2);
  h.D = Eigen::MatrixXd::Zero(2, 2);
  h.K.resize(2, 2);
  h.K << 2.0, -1.0, -1.0, 2.0;
  return h;
}

namespace detail {

/// Element coordinates become host displacements. Time derivatives stay
/// derivatives of the displacement series (not the velocity unknowns), so
/// conditions such as a velocity reversal coincide with the displacement extremum
/// even away from a converged solution.
inline void rename(PolynomialExpr& e, const std::map<std::string, std::string>& plain) {
  for (auto& t : e.terms)
    for (auto& f : t.factors) {
      auto it = plain.find(f.symbol);
      if (it != plain.end()) f.symbol = it->second;
    }
}

inline std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> r(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(i)].push_back(m(i, j));
  return r;
}

}  // namespace detail

inline SystemDefinition assemble_first_order(const MechanicalHost& host, const std::optional<Excitation>& exc,
                                             const std::optional<Attachment>& att) {
  const auto n = static_cast<Eigen::Index>(host.dofs());
  if (host.M.rows() != host.M.cols() || host.D.rows() != n || host.D.cols() != n || host.K.rows() != n ||
      host.K.cols() != n)
    throw Error(ErrorKind::InvalidArgument, "structural matrices must be square and of equal size");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(host.M);
  if (n == 0 || !lu.isInvertible()) throw Error(ErrorKind::SingularMassMatrix, "mass matrix is singular");
  const Eigen::MatrixXd Minv = lu.inverse();
  const Eigen::MatrixXd A = -Minv * host.D;
  const Eigen::MatrixXd B = -Minv * host.K;

  SystemDefinition sys;
  std::vector<std::string> xs, vs;
  for (Eigen::Index i = 0; i < n; ++i) {
    xs.push_back("x" + std::to_string(i + 1));
    vs.push_back("xd" + std::to_string(i + 1));
  }
  sys.components = xs;
  sys.components.insert(sys.components.end(), vs.begin(), vs.end());
  sys.name = att ? att->element.name + "-on-" + std::to_string(n) + "dof" : std::to_string(n) + "dof-linear";

  if (exc) {
    if (exc->pattern.size() != host.dofs())
      throw Error(ErrorKind::InvalidArgument, "excitation pattern size must equal the number of DOFs");
    sys.parameters.emplace_back(exc->parameter, exc->amplitude);
  }

  std::map<std::string, std::string> plain;
  std::vector<std::vector<PolynomialExpr>> element_force(host.dofs());  // per DOF, per element state
  if (att) {
    const auto& el = att->element;
    if (att->dofs.size() != el.components.size())
      throw Error(ErrorKind::InvalidArgument, "attachment must map every element coordinate to a DOF");
    for (std::size_t c = 0; c < el.components.size(); ++c) {
      const int d = att->dofs[c];
      if (d < 0 || d >= n) throw Error(ErrorKind::InvalidArgument, "attachment DOF out of range");
      plain[el.components[c]] = xs[static_cast<std::size_t>(d)];
    }
    sys.internal = el.internal;
    for (const auto& p : el.parameters) {
      if (sys.parameter_index(p.first) >= 0)
        throw Error(ErrorKind::InvalidDefinition, "element parameter '" + p.first + "' clashes with a host parameter");
      sys.parameters.push_back(p);
    }
    if (el.seed_phase) {
      sys.seed_phase = *el.seed_phase;
      detail::rename(*sys.seed_phase, plain);
    }
  }

  auto build_state = [&](const StateDefinition* es) {
    StateDefinition st;
    if (es) {
      st = *es;
      for (auto& [nm, e] : st.named) detail::rename(e, plain);
      for (auto& tr : st.transitions) {
        detail::rename(tr.condition, plain);
        if (tr.guard) detail::rename(tr.guard->expr, plain);
      }
      for (auto* rules : {&st.internal_updates, &st.initial_updates})
        for (auto& u : *rules) {
          detail::rename(u.expr, plain);
          if (u.fallback) detail::rename(*u.fallback, plain);
        }
      for (auto& p : st.region) detail::rename(p.expr, plain);
    } else {
      st.id = 1;
      st.label = "linear";
      st.default_entry = true;
    }
    // nonlinear force acting on each DOF in this state
    std::vector<PolynomialExpr> fnl(host.dofs());
    if (es)
      for (std::size_t c = 0; c < es->dynamics.size(); ++c) {
        PolynomialExpr e = es->dynamics[c];
        detail::rename(e, plain);
        auto& slot = fnl[static_cast<std::size_t>(att->dofs[c])];
        slot = slot + e;
      }

    st.dynamics.clear();
    for (Eigen::Index i = 0; i < n; ++i) st.dynamics.push_back(PolynomialExpr::symbol(vs[static_cast<std::size_t>(i)]));
    for (Eigen::Index i = 0; i < n; ++i) {
      PolynomialExpr row;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (A(i, k) != 0.0) row = row + PolynomialExpr::symbol(vs[static_cast<std::size_t>(k)], A(i, k));
        if (B(i, k) != 0.0) row = row + PolynomialExpr::symbol(xs[static_cast<std::size_t>(k)], B(i, k));
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (Minv(i, j) == 0.0) continue;
        if (!fnl[static_cast<std::size_t>(j)].empty()) row = row + (-Minv(i, j)) * fnl[static_cast<std::size_t>(j)];
        if (exc && exc->pattern[static_cast<std::size_t>(j)] != 0.0) {
          const double w = Minv(i, j) * exc->pattern[static_cast<std::size_t>(j)];
          row = row + PolynomialExpr{Term{w, {Factor(exc->parameter), Factor("cos")}}};
        }
      }
      if (row.empty()) row = PolynomialExpr::constant(0.0);
      st.dynamics.push_back(row);
    }
    return st;
  };

  if (att)
    for (const auto& es : att->element.states) sys.states.push_back(build_state(&es));
  else
    sys.states.push_back(build_state(nullptr));

  MechanicalMetadata meta;
  meta.M = detail::to_rows(host.M);
  meta.D = detail::to_rows(host.D);
  meta.K = detail::to_rows(host.K);
  meta.displacement = xs;
  meta.velocity = vs;
  sys.mechanical = meta;
  sys.finalize();
  return sys;
}

}  // namespace hbevent
