#pragma once

// JSON form of SystemDefinition. Expressions are term lists
// [coeff, [[symbol, exponent], ...]]; a factor [symbol, exponent, true]
// denotes the time derivative of the symbol.

#include <fstream>
#include <string>

#include "hbevent/state_model.hpp"
#include "json.hpp"

namespace hbevent {

using Json = nlohmann::ordered_json;

inline Json expr_to_json(const PolynomialExpr& e) {
  Json terms = Json::array();
  for (const auto& t : e.terms) {
    Json factors = Json::array();
    for (const auto& f : t.factors) {
      Json jf = Json::array({f.symbol, f.exponent});
      if (f.dot) jf.push_back(true);
      factors.push_back(jf);
    }
    terms.push_back(Json::array({t.coeff, factors}));
  }
  return terms;
}

inline PolynomialExpr expr_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidDefinition, "expression must be a list of terms");
  PolynomialExpr e;
  for (const auto& jt : j) {
    if (!jt.is_array() || jt.size() != 2 || !jt[0].is_number() || !jt[1].is_array())
      throw Error(ErrorKind::InvalidDefinition, "term must be [coeff, [[symbol, exponent], ...]]");
    Term t;
    t.coeff = jt[0].get<double>();
    for (const auto& jf : jt[1]) {
      if (!jf.is_array() || jf.size() < 2 || jf.size() > 3 || !jf[0].is_string() || !jf[1].is_number_integer())
        throw Error(ErrorKind::InvalidDefinition, "factor must be [symbol, exponent] or [symbol, exponent, true]");
      Factor f(jf[0].get<std::string>(), jf[1].get<int>(), jf.size() == 3 && jf[2].get<bool>());
      t.factors.push_back(std::move(f));
    }
    e.terms.push_back(std::move(t));
  }
  return e;
}

namespace detail {

inline Json predicate_to_json(const Predicate& p) { return Json{{"expr", expr_to_json(p.expr)}, {"op", to_string(p.op)}}; }

inline Predicate predicate_from_json(const Json& j) {
  return Predicate{expr_from_json(j.at("expr")), comparison_from_string(j.at("op").get<std::string>())};
}

inline Json updates_to_json(const std::vector<InternalUpdate>& rules) {
  Json a = Json::array();
  for (const auto& u : rules) {
    Json ju{{"target", u.target}, {"kind", u.kind == InternalUpdate::Kind::Sign ? "sign" : "expression"},
            {"expr", expr_to_json(u.expr)}};
    if (u.fallback) ju["fallback"] = expr_to_json(*u.fallback);
    a.push_back(ju);
  }
  return a;
}

inline std::vector<InternalUpdate> updates_from_json(const Json& j) {
  std::vector<InternalUpdate> rules;
  for (const auto& ju : j) {
    InternalUpdate u;
    u.target = ju.at("target").get<std::string>();
    const auto kind = ju.value("kind", std::string("expression"));
    if (kind == "sign")
      u.kind = InternalUpdate::Kind::Sign;
    else if (kind != "expression")
      throw Error(ErrorKind::InvalidDefinition, "unknown update kind '" + kind + "'");
    u.expr = expr_from_json(ju.at("expr"));
    if (ju.contains("fallback")) u.fallback = expr_from_json(ju["fallback"]);
    rules.push_back(std::move(u));
  }
  return rules;
}

inline Json matrix_to_json(const std::vector<std::vector<double>>& m) { return Json(m); }

}  // namespace detail

inline Json system_to_json(const SystemDefinition& sys) {
  using namespace detail;
  Json j;
  j["name"] = sys.name;
  j["dimension"] = sys.dimension();
  j["components"] = sys.components;
  j["internal"] = sys.internal;
  Json params = Json::array();
  for (const auto& [n, v] : sys.parameters) params.push_back(Json::array({n, v}));
  j["parameters"] = params;
  if (sys.seed_phase) j["seed_phase"] = expr_to_json(*sys.seed_phase);
  if (sys.mechanical) {
    const auto& m = *sys.mechanical;
    j["mechanical"] = Json{{"M", matrix_to_json(m.M)},
                           {"D", matrix_to_json(m.D)},
                           {"K", matrix_to_json(m.K)},
                           {"displacement", m.displacement},
                           {"velocity", m.velocity}};
  }
  Json states = Json::array();
  for (const auto& st : sys.states) {
    Json js;
    js["id"] = st.id;
    js["label"] = st.label;
    if (st.default_entry) js["default_entry"] = true;
    Json named = Json::array();
    for (const auto& [n, e] : st.named) named.push_back(Json::array({n, expr_to_json(e)}));
    js["named"] = named;
    Json dyn = Json::array();
    for (const auto& e : st.dynamics) dyn.push_back(expr_to_json(e));
    js["dynamics"] = dyn;
    Json trs = Json::array();
    for (const auto& t : st.transitions) {
      Json jt{{"to", t.to}, {"condition", expr_to_json(t.condition)}};
      if (t.guard) jt["guard"] = predicate_to_json(*t.guard);
      trs.push_back(jt);
    }
    js["transitions"] = trs;
    js["internal_updates"] = updates_to_json(st.internal_updates);
    if (!st.initial_updates.empty()) js["initial_updates"] = updates_to_json(st.initial_updates);
    Json region = Json::array();
    for (const auto& p : st.region) region.push_back(predicate_to_json(p));
    js["region"] = region;
    js["successors"] = st.successors;
    states.push_back(js);
  }
  j["states"] = states;
  return j;
}

/// Parses and finalizes a system; structural errors raise InvalidDefinition.
inline SystemDefinition system_from_json(const Json& j) {
  using namespace detail;
  SystemDefinition sys;
  try {
    sys.name = j.value("name", std::string("system"));
    sys.components = j.at("components").get<std::vector<std::string>>();
    if (j.contains("dimension") && j["dimension"].get<std::size_t>() != sys.components.size())
      throw Error(ErrorKind::InvalidDefinition, "dimension does not match the component list");
    sys.internal = j.value("internal", std::vector<std::string>{});
    for (const auto& p : j.value("parameters", Json::array())) {
      if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::InvalidDefinition, "parameter must be [name, value]");
      sys.parameters.emplace_back(p[0].get<std::string>(), p[1].get<double>());
    }
    if (j.contains("seed_phase")) sys.seed_phase = expr_from_json(j["seed_phase"]);
    if (j.contains("mechanical")) {
      const auto& jm = j["mechanical"];
      MechanicalMetadata m;
      m.M = jm.at("M").get<std::vector<std::vector<double>>>();
      m.D = jm.at("D").get<std::vector<std::vector<double>>>();
      m.K = jm.at("K").get<std::vector<std::vector<double>>>();
      m.displacement = jm.at("displacement").get<std::vector<std::string>>();
      m.velocity = jm.at("velocity").get<std::vector<std::string>>();
      sys.mechanical = m;
    }
    for (const auto& js : j.at("states")) {
      StateDefinition st;
      st.id = js.at("id").get<int>();
      st.label = js.value("label", std::string());
      st.default_entry = js.value("default_entry", false);
      for (const auto& n : js.value("named", Json::array())) {
        if (!n.is_array() || n.size() != 2) throw Error(ErrorKind::InvalidDefinition, "named entry must be [name, expr]");
        st.named.emplace_back(n[0].get<std::string>(), expr_from_json(n[1]));
      }
      for (const auto& e : js.at("dynamics")) st.dynamics.push_back(expr_from_json(e));
      for (const auto& jt : js.value("transitions", Json::array())) {
        Transition t;
        t.to = jt.at("to").get<int>();
        t.condition = expr_from_json(jt.at("condition"));
        if (jt.contains("guard")) t.guard = predicate_from_json(jt["guard"]);
        st.transitions.push_back(std::move(t));
      }
      st.internal_updates = updates_from_json(js.value("internal_updates", Json::array()));
      st.initial_updates = updates_from_json(js.value("initial_updates", Json::array()));
      for (const auto& p : js.value("region", Json::array())) st.region.push_back(predicate_from_json(p));
      st.successors = js.value("successors", std::vector<int>{});
      sys.states.push_back(std::move(st));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidDefinition, std::string("malformed system definition: ") + e.what());
  }
  sys.finalize();
  return sys;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidDefinition, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace hbevent
