#pragma once

// Builtin nonlinear elements in prescribed-displacement form: the components
// are the element coordinates and the dynamics rows are the element forces,
// so the force coefficients of the system are those of the nonlinear force.

#include <string>
#include <utility>
#include <vector>

#include "hbevent/state_model.hpp"

namespace hbevent::elements {

namespace detail {

inline PolynomialExpr s(const std::string& name, int e = 1) { return PolynomialExpr::symbol(name, 1.0, e); }
inline PolynomialExpr c(double v) { return PolynomialExpr::constant(v); }

inline InternalUpdate assign(const std::string& target, PolynomialExpr e) {
  InternalUpdate u;
  u.target = target;
  u.expr = std::move(e);
  return u;
}

inline InternalUpdate sign_of(const std::string& target, PolynomialExpr e,
                              std::optional<PolynomialExpr> fallback = std::nullopt) {
  InternalUpdate u;
  u.target = target;
  u.kind = InternalUpdate::Kind::Sign;
  u.expr = std::move(e);
  u.fallback = std::move(fallback);
  return u;
}

}  // namespace detail

/// f = knl x^3, single state.
inline SystemDefinition cubic_spring(double knl = 0.5) {
  using namespace detail;
  SystemDefinition sys;
  sys.name = "cubic-spring";
  sys.components = {"x"};
  sys.parameters = {{"knl", knl}};
  StateDefinition st;
  st.id = 1;
  st.label = "elastic";
  st.default_entry = true;
  st.named = {{"f", s("knl") * s("x", 3)}};
  st.dynamics = {s("f")};
  sys.states = {st};
  sys.finalize();
  return sys;
}

/// Three quadratic/linear branches joined at x = 1 and x = 3.
inline SystemDefinition piecewise_spring() {
  using namespace detail;
  SystemDefinition sys;
  sys.name = "piecewise-spring";
  sys.components = {"x"};
  const auto x = s("x");

  StateDefinition s1;
  s1.id = 1;
  s1.label = "lower";
  s1.default_entry = true;
  s1.named = {{"f", (-1.0) * (x - c(1.0)) * (x - c(1.0)) + c(1.0)}};
  s1.dynamics = {s("f")};
  s1.successors = {2};
  s1.transitions = {{2, x - c(1.0), std::nullopt}};
  s1.region = {{x - c(1.0), Comparison::LessEqual}};

  StateDefinition s2;
  s2.id = 2;
  s2.label = "middle";
  s2.named = {{"f", (-1.0) * (x - c(2.0))}};
  s2.dynamics = {s("f")};
  s2.successors = {1, 3};
  s2.transitions = {{1, x - c(1.0), std::nullopt}, {3, x - c(3.0), std::nullopt}};
  s2.region = {{x - c(1.0), Comparison::Greater}, {x - c(3.0), Comparison::Less}};

  StateDefinition s3;
  s3.id = 3;
  s3.label = "upper";
  s3.named = {{"f", (x - c(3.0)) * (x - c(3.0)) - c(1.0)}};
  s3.dynamics = {s("f")};
  s3.successors = {2};
  s3.transitions = {{2, x - c(3.0), std::nullopt}};
  s3.region = {{x - c(3.0), Comparison::GreaterEqual}};

  sys.states = {s1, s2, s3};
  sys.finalize();
  return sys;
}

/// Spring kt in series with a Coulomb slider of limit force fc.
/// v1: slider position, v2: slip direction.
inline SystemDefinition coulomb(double kt = 0.35, double fc = 0.1) {
  using namespace detail;
  SystemDefinition sys;
  sys.name = "elastic-coulomb";
  sys.components = {"x"};
  sys.internal = {"v1", "v2"};
  sys.parameters = {{"kt", kt}, {"fc", fc}};
  sys.seed_phase = s("x");
  const auto f = s("f");

  StateDefinition stick;
  stick.id = 1;
  stick.label = "stick";
  stick.default_entry = true;
  stick.named = {{"f", s("kt") * (s("x") - s("v1"))}};
  stick.dynamics = {f};
  stick.successors = {2};
  stick.transitions = {{2, f * f - s("fc", 2), std::nullopt}};
  stick.internal_updates = {assign("v1", s("x") - s("kt", -1) * f)};
  stick.region = {{f * f - s("fc", 2), Comparison::LessEqual}};

  StateDefinition slip;
  slip.id = 2;
  slip.label = "slip";
  slip.named = {{"f", s("v2") * s("fc")}};
  slip.dynamics = {f};
  slip.successors = {1};
  slip.transitions = {{1, dot("x"), std::nullopt}};
  slip.internal_updates = {sign_of("v2", f)};

  sys.states = {stick, slip};
  sys.finalize();
  return sys;
}

/// Piecewise linear superelastic hysteresis with stiffness k, transformation
/// stress fst, hysteresis half width fc and transformation strain a.
inline SystemDefinition shape_memory_alloy(double k = 1.0, double fst = 1.0, double fc = 0.2, double a = 1.0) {
  using namespace detail;
  SystemDefinition sys;
  sys.name = "shape-memory-alloy";
  sys.components = {"x"};
  sys.internal = {"v2", "v3", "v4", "v5"};
  sys.parameters = {{"k", k}, {"fst", fst}, {"fc", fc}, {"a", a}};
  sys.seed_phase = s("x");
  const auto x = s("x"), f = s("f");
  const auto upper = s("fst") + s("fc");  // forward transformation level
  const auto lower = s("fst") - s("fc");  // reverse transformation level

  StateDefinition s1;
  s1.id = 1;
  s1.label = "austenite";
  s1.default_entry = true;
  s1.named = {{"f", s("k") * x}};
  s1.dynamics = {f};
  s1.successors = {2};
  s1.transitions = {{2, f * f - upper * upper, std::nullopt}};
  s1.region = {{f * f - upper * upper, Comparison::LessEqual}};

  StateDefinition s2;
  s2.id = 2;
  s2.label = "forward transformation";
  s2.named = {{"f", s("v2") * upper}};
  s2.dynamics = {f};
  s2.successors = {3, 5};
  s2.transitions = {{3, s("k") * s("v2") * x - s("k") * s("a") - upper, std::nullopt}, {5, dot("x"), std::nullopt}};
  s2.internal_updates = {sign_of("v2", x)};

  StateDefinition s3;
  s3.id = 3;
  s3.label = "martensite";
  s3.named = {{"f", s("k") * (x - s("v3") * s("a"))}};
  s3.dynamics = {f};
  s3.successors = {4};
  s3.transitions = {{4, f - s("v3") * lower, std::nullopt}};
  s3.internal_updates = {assign("v3", s("v2"))};
  // without history: loaded beyond the transformation strain, at a reversal
  s3.initial_updates = {sign_of("v2", x), assign("v3", s("v2"))};
  s3.region = {{s("k") * s("v3") * x - s("k") * s("a") - upper, Comparison::GreaterEqual}};

  StateDefinition s4;
  s4.id = 4;
  s4.label = "reverse transformation";
  s4.named = {{"f", s("v4") * lower}};
  s4.dynamics = {f};
  s4.successors = {1, 5};
  s4.transitions = {{1, s("k") * s("v4") * x - lower, std::nullopt}, {5, dot("x"), std::nullopt}};
  s4.internal_updates = {assign("v4", s("v2"))};

  StateDefinition s5;
  s5.id = 5;
  s5.label = "elastic unloading";
  s5.named = {{"f", s("k") * (x - s("v5"))}};
  s5.dynamics = {f};
  s5.successors = {2, 4};
  s5.transitions = {{2, f * f - upper * upper, std::nullopt}, {4, f * f - lower * lower, std::nullopt}};
  s5.internal_updates = {assign("v5", x - s("k", -1) * f)};
  // without history: reversal on the forward plateau
  s5.initial_updates = {sign_of("v2", x), assign("v5", x - s("k", -1) * s("v2") * upper)};
  s5.region = {{s("k") * s("k") * x * x - upper * upper, Comparison::Greater},
               {s("k") * s("v2") * x - s("k") * s("a") - upper, Comparison::Less}};

  sys.states = {s1, s2, s3, s4, s5};
  sys.finalize();
  return sys;
}

/// Unilateral normal contact with Coulomb friction. Contact is closed while
/// xn + g > 0; g > 0 is a closed gap (normal preload kn g at xn = 0).
/// v2: stick position, v3: slip direction.
inline SystemDefinition contact(double kn = 1.0, double kt = 1.0, double mu = 0.3, double g = 1.0) {
  using namespace detail;
  SystemDefinition sys;
  sys.name = "friction-contact";
  sys.components = {"xn", "xt"};
  sys.internal = {"v2", "v3"};
  sys.parameters = {{"kn", kn}, {"kt", kt}, {"mu", mu}, {"g", g}};
  sys.seed_phase = s("xt");
  const auto gap = s("xn") + s("g");
  const auto f1 = s("f1"), f2 = s("f2");
  // normal approach fast enough relative to tangential motion to stick
  const auto stick_guard = s("mu", 2) * s("kn", 2) * dot("xn") * dot("xn") - s("kt", 2) * dot("xt") * dot("xt");

  StateDefinition sep;
  sep.id = 1;
  sep.label = "separation";
  sep.named = {{"f1", c(0.0)}, {"f2", c(0.0)}};
  sep.dynamics = {f1, f2};
  sep.successors = {2, 3};
  sep.transitions = {{2, gap, Predicate{stick_guard, Comparison::Greater}},
                     {3, gap, Predicate{stick_guard, Comparison::LessEqual}}};
  sep.region = {{gap, Comparison::Less}};

  StateDefinition stick;
  stick.id = 2;
  stick.label = "stick";
  stick.default_entry = true;
  stick.named = {{"f1", s("kn") * gap}, {"f2", s("kt") * (s("xt") - s("v2"))}};
  stick.dynamics = {f1, f2};
  stick.successors = {1, 3};
  stick.transitions = {{1, gap, std::nullopt}, {3, f2 * f2 - s("mu", 2) * f1 * f1, std::nullopt}};
  stick.internal_updates = {assign("v2", s("xt") - s("kt", -1) * f2)};
  stick.region = {{gap, Comparison::GreaterEqual}, {f2 * f2 - s("mu", 2) * f1 * f1, Comparison::LessEqual}};

  StateDefinition slip;
  slip.id = 3;
  slip.label = "slip";
  slip.named = {{"f1", s("kn") * gap}, {"f2", s("v3") * s("mu") * s("kn") * gap}};
  slip.dynamics = {f1, f2};
  slip.successors = {1, 2};
  slip.transitions = {{1, gap, std::nullopt}, {2, dot("f2") - s("kt") * dot("xt"), std::nullopt}};
  slip.internal_updates = {sign_of("v3", f2, dot("xt"))};

  sys.states = {sep, stick, slip};
  sys.finalize();
  return sys;
}

/// The builtin elements with default parameters, keyed by fixture file stem.
inline std::vector<std::pair<std::string, SystemDefinition>> builtin() {
  return {{"cubic", cubic_spring()},
          {"piecewise-spring", piecewise_spring()},
          {"coulomb", coulomb()},
          {"sma", shape_memory_alloy()},
          {"contact", contact()}};
}

}  // namespace hbevent::elements
