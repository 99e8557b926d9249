#pragma once

// Declarative systems with distinct states.
//
// Each state owns its dynamics (one polynomial per component of y), named
// sub-expressions (e.g. the nonlinear force), transition conditions whose
// zero crossings trigger a change of state, and rules that set internal
// variables at state entry from y and the previous state's named
// expressions.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbevent/expression.hpp"

namespace hbevent {

enum class Comparison { Less, LessEqual, Greater, GreaterEqual };

inline bool compare(double value, Comparison op) {
  switch (op) {
    case Comparison::Less: return value < 0.0;
    case Comparison::LessEqual: return value <= 0.0;
    case Comparison::Greater: return value > 0.0;
    case Comparison::GreaterEqual: return value >= 0.0;
  }
  return false;
}

inline const char* to_string(Comparison op) {
  switch (op) {
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Greater: return ">";
    case Comparison::GreaterEqual: return ">=";
  }
  return "?";
}

inline Comparison comparison_from_string(const std::string& s) {
  if (s == "<") return Comparison::Less;
  if (s == "<=") return Comparison::LessEqual;
  if (s == ">") return Comparison::Greater;
  if (s == ">=") return Comparison::GreaterEqual;
  throw Error(ErrorKind::InvalidDefinition, "unknown comparison '" + s + "'");
}

/// `expr op 0` must hold.
struct Predicate {
  PolynomialExpr expr;
  Comparison op = Comparison::Greater;

  bool operator==(const Predicate& o) const { return expr == o.expr && op == o.op; }
};

struct Transition {
  int to = 0;
  PolynomialExpr condition;
  /// A root of `condition` is admissible only where the guard holds.
  std::optional<Predicate> guard;

  bool operator==(const Transition& o) const { return to == o.to && condition == o.condition && guard == o.guard; }
};

struct InternalUpdate {
  enum class Kind { Expression, Sign };
  std::string target;
  Kind kind = Kind::Expression;
  PolynomialExpr expr;
  /// For Sign rules: used when both expr and its time derivative vanish.
  std::optional<PolynomialExpr> fallback;
  int index = -1;

  bool operator==(const InternalUpdate& o) const {
    return target == o.target && kind == o.kind && expr == o.expr && fallback == o.fallback;
  }
};

struct StateDefinition {
  int id = 1;
  std::string label;
  bool default_entry = false;
  std::vector<std::pair<std::string, PolynomialExpr>> named;
  std::vector<PolynomialExpr> dynamics;
  std::vector<Transition> transitions;
  std::vector<InternalUpdate> internal_updates;
  /// Rules used instead of internal_updates when the state is entered
  /// without history (start of the transition loop).
  std::vector<InternalUpdate> initial_updates;
  std::vector<Predicate> region;
  std::vector<int> successors;

  const Transition* transition_to(int l) const {
    for (const auto& t : transitions)
      if (t.to == l) return &t;
    return nullptr;
  }

  bool operator==(const StateDefinition& o) const {
    return id == o.id && label == o.label && default_entry == o.default_entry && named == o.named &&
           dynamics == o.dynamics && transitions == o.transitions && internal_updates == o.internal_updates &&
           initial_updates == o.initial_updates && region == o.region && successors == o.successors;
  }
};

struct MechanicalMetadata {
  std::vector<std::vector<double>> M, D, K;
  std::vector<std::string> displacement;  // component names of x
  std::vector<std::string> velocity;      // component names of xdot

  bool operator==(const MechanicalMetadata& o) const {
    return M == o.M && D == o.D && K == o.K && displacement == o.displacement && velocity == o.velocity;
  }
};

class SystemDefinition {
 public:
  std::string name;
  std::vector<std::string> components;
  std::vector<std::string> internal;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<StateDefinition> states;
  std::optional<MechanicalMetadata> mechanical;
  /// The transition loop starts where this expression of y is largest.
  std::optional<PolynomialExpr> seed_phase;

  std::size_t dimension() const { return components.size(); }
  const std::vector<std::string>& named() const { return named_; }

  double parameter(const std::string& p) const {
    for (const auto& [k, v] : parameters)
      if (k == p) return v;
    throw Error(ErrorKind::UnboundSymbol, "unknown parameter '" + p + "'");
  }

  int parameter_index(const std::string& p) const {
    for (std::size_t i = 0; i < parameters.size(); ++i)
      if (parameters[i].first == p) return static_cast<int>(i);
    return -1;
  }

  void set_parameter(const std::string& p, double v) {
    for (auto& [k, val] : parameters)
      if (k == p) {
        val = v;
        return;
      }
    throw Error(ErrorKind::UnboundSymbol, "unknown parameter '" + p + "'");
  }

  int component_index(const std::string& c) const {
    for (std::size_t i = 0; i < components.size(); ++i)
      if (components[i] == c) return static_cast<int>(i);
    return -1;
  }

  std::size_t state_index(int id) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].id == id) return i;
    throw Error(ErrorKind::InvalidDefinition, "unknown state id " + std::to_string(id));
  }

  bool finalized() const { return finalized_; }

  bool operator==(const SystemDefinition& o) const {
    return name == o.name && components == o.components && internal == o.internal && parameters == o.parameters &&
           states == o.states && mechanical == o.mechanical && seed_phase == o.seed_phase;
  }

  /// Resolves symbols and checks the structural invariants. Must be called
  /// after construction or modification.
  void finalize() {
    if (components.empty()) throw Error(ErrorKind::InvalidDefinition, "system has no components");
    if (states.empty()) throw Error(ErrorKind::InvalidDefinition, "system has no states");

    std::map<std::string, std::pair<FactorKind, int>> table;
    auto declare = [&](const std::string& s, FactorKind k, int i) {
      if (s == "cos" || s == "sin") throw Error(ErrorKind::InvalidDefinition, "reserved symbol '" + s + "'");
      if (!table.emplace(s, std::make_pair(k, i)).second)
        throw Error(ErrorKind::InvalidDefinition, "duplicate symbol '" + s + "'");
    };
    for (std::size_t i = 0; i < components.size(); ++i) declare(components[i], FactorKind::Component, int(i));
    for (std::size_t i = 0; i < internal.size(); ++i) declare(internal[i], FactorKind::Internal, int(i));
    for (std::size_t i = 0; i < parameters.size(); ++i) declare(parameters[i].first, FactorKind::Parameter, int(i));

    named_.clear();
    for (const auto& [n, e] : states.front().named) named_.push_back(n);
    for (std::size_t i = 0; i < named_.size(); ++i) declare(named_[i], FactorKind::Named, int(i));

    std::map<int, int> ids;
    for (auto& st : states) {
      if (!ids.emplace(st.id, 0).second)
        throw Error(ErrorKind::InvalidDefinition, "duplicate state id " + std::to_string(st.id));
    }

    for (auto& st : states) {
      const std::string where = "state " + std::to_string(st.id);
      if (st.named.size() != named_.size())
        throw Error(ErrorKind::InvalidDefinition, where + " must define every named expression");
      for (std::size_t i = 0; i < named_.size(); ++i) {
        if (st.named[i].first != named_[i])
          throw Error(ErrorKind::InvalidDefinition, where + ": named expressions must follow the common order");
        resolve(st.named[i].second, table, where, int(i), true);
      }
      if (st.dynamics.size() != components.size())
        throw Error(ErrorKind::InvalidDefinition, where + ": dynamics size must equal the dimension of y");
      for (auto& e : st.dynamics) {
        resolve(e, table, where, int(named_.size()), false);
      }
      for (auto& tr : st.transitions) {
        if (std::find(st.successors.begin(), st.successors.end(), tr.to) == st.successors.end())
          throw Error(ErrorKind::InvalidDefinition, where + ": transition target not in successor set");
        if (!ids.count(tr.to)) throw Error(ErrorKind::InvalidDefinition, where + ": unknown transition target");
        resolve(tr.condition, table, where, int(named_.size()), true);
        if (tr.guard) resolve(tr.guard->expr, table, where, int(named_.size()), true);
      }
      for (int l : st.successors)
        if (!st.transition_to(l))
          throw Error(ErrorKind::InvalidDefinition, where + ": successor without transition condition");
      for (auto* rules : {&st.internal_updates, &st.initial_updates})
        for (auto& u : *rules) {
          auto it = table.find(u.target);
          if (it == table.end() || it->second.first != FactorKind::Internal)
            throw Error(ErrorKind::UnboundSymbol,
                        where + ": update target '" + u.target + "' is not an internal variable");
          u.index = it->second.second;
          resolve(u.expr, table, where, int(named_.size()), true);
          if (u.fallback) resolve(*u.fallback, table, where, int(named_.size()), true);
        }
      for (auto& p : st.region) resolve(p.expr, table, where, int(named_.size()), true);
    }
    if (seed_phase) {
      resolve(*seed_phase, table, "seed phase", 0, false);
      for (const auto& t : seed_phase->terms)
        for (const auto& f : t.factors)
          if (f.kind == FactorKind::Internal)
            throw Error(ErrorKind::InvalidDefinition, "seed phase may not reference internal variables");
    }
    if (mechanical && 2 * mechanical->displacement.size() != components.size())
      throw Error(ErrorKind::InvalidDefinition, "mechanical metadata: dim(y) must be twice the displacement count");
    finalized_ = true;
  }

 private:
  static void resolve(PolynomialExpr& e, const std::map<std::string, std::pair<FactorKind, int>>& table,
                      const std::string& where, int named_limit, bool allow_dot) {
    for (auto& t : e.terms)
      for (auto& f : t.factors) {
        if (f.symbol == "cos" || f.symbol == "sin") {
          f.kind = f.symbol == "cos" ? FactorKind::Cos : FactorKind::Sin;
          f.index = 0;
        } else {
          auto it = table.find(f.symbol);
          if (it == table.end()) throw Error(ErrorKind::UnboundSymbol, where + ": unknown symbol '" + f.symbol + "'");
          f.kind = it->second.first;
          f.index = it->second.second;
          if (f.kind == FactorKind::Named && f.index >= named_limit)
            throw Error(ErrorKind::InvalidDefinition,
                        where + ": named expression '" + f.symbol + "' used before its definition");
        }
        if (f.exponent < 1 && f.kind != FactorKind::Parameter)
          throw Error(ErrorKind::InvalidDefinition, where + ": only parameters may carry exponents below 1");
        if (f.dot && (!allow_dot || (f.kind != FactorKind::Component && f.kind != FactorKind::Named)))
          throw Error(ErrorKind::InvalidDefinition, where + ": time derivative not allowed on '" + f.symbol + "'");
      }
  }

  std::vector<std::string> named_;
  bool finalized_ = false;
};

}  // namespace hbevent
