#pragma once

// Runnable configurations: a system plus solver settings, sweep ranges and
// study parameters. Files hold the system definition and a `scenario`
// section.

#include <cmath>
#include <string>
#include <vector>

#include "hbevent/aft.hpp"
#include "hbevent/elements.hpp"
#include "hbevent/json_io.hpp"
#include "hbevent/solver.hpp"
#include "hbevent/systems.hpp"

namespace hbevent {

enum class ScenarioKind { Frf, Nnm, OptCurve, Hysteresis, AftCompare };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Frf: return "frf";
    case ScenarioKind::Nnm: return "nnm";
    case ScenarioKind::OptCurve: return "optcurve";
    case ScenarioKind::Hysteresis: return "hysteresis";
    case ScenarioKind::AftCompare: return "aft-compare";
  }
  return "?";
}

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::Frf, ScenarioKind::Nnm, ScenarioKind::OptCurve, ScenarioKind::Hysteresis,
                 ScenarioKind::AftCompare})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::InvalidDefinition, "unknown scenario kind '" + s + "'");
}

struct Scenario {
  std::string name;
  std::string description;
  ScenarioKind kind = ScenarioKind::Frf;
  SystemDefinition system;
  int H = 7;
  std::size_t response = 0;  // component whose harmonic-1 amplitude is reported

  // frf: lambda = Omega; nnm: lambda = amplitude 2|Y1| of component 0
  ContinuationSettings continuation;
  double start = 0.0;  // Omega (frf) or amplitude (nnm) of the first point
  double start_omega = 1.0;
  std::vector<double> mode_shape;  // nnm start guess per displacement DOF

  std::string sweep_parameter;  // outer parameter loop (frf, optcurve)
  std::vector<double> sweep_values;

  // validation against the time oracle
  std::vector<double> validate_values;  // sweep parameter values, defaults to sweep_values
  std::vector<double> validate_points;  // Omega (frf) or amplitude (nnm)
  int validate_H = 15;

  // optcurve
  std::vector<std::string> perturbed;
  std::vector<double> perturbations{-0.25, 0.25};
  int tracked_state = 1;  // its time fraction is reported (stick for friction)
  double taylor_tolerance = 0.05;

  // hysteresis: prescribed x = a cos(tau) on component 0
  std::vector<double> amplitudes;

  CompareSettings aft;
};

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline void put_finite(Json& j, const char* key, double v) {
  if (std::isfinite(v)) j[key] = v;
}

inline Json continuation_to_json(const ContinuationSettings& c) {
  Json j;
  put_finite(j, "lambda_min", c.lambda_min);
  put_finite(j, "lambda_max", c.lambda_max);
  j["initial_step"] = c.initial_step;
  j["min_step"] = c.min_step;
  j["max_step"] = c.max_step;
  j["max_points"] = c.max_points;
  j["direction"] = c.direction;
  put_finite(j, "max_coefficient", c.max_coefficient);
  return j;
}

inline ContinuationSettings continuation_from_json(const Json& j) {
  ContinuationSettings c;
  const double inf = std::numeric_limits<double>::infinity();
  c.lambda_min = j.value("lambda_min", -inf);
  c.lambda_max = j.value("lambda_max", inf);
  c.initial_step = j.value("initial_step", c.initial_step);
  c.min_step = j.value("min_step", c.min_step);
  c.max_step = j.value("max_step", c.max_step);
  c.max_points = j.value("max_points", c.max_points);
  c.direction = j.value("direction", c.direction);
  c.max_coefficient = j.value("max_coefficient", inf);
  return c;
}

inline Json aft_to_json(const CompareSettings& s) {
  return Json{{"harmonics", s.H},
              {"omega", s.omega},
              {"sample_counts", s.sample_counts},
              {"trials", s.trials},
              {"seed", s.seed},
              {"jacobian_trials", s.jacobian_trials},
              {"timing_draws", s.timing_draws},
              {"timing_repetitions", s.timing_repetitions},
              {"amplitude", s.amplitude},
              {"decay", s.decay},
              {"offset", s.offset},
              {"max_redraws", s.max_redraws},
              {"fd_step", s.fd_step}};
}

inline CompareSettings aft_from_json(const Json& j) {
  CompareSettings s;
  s.H = j.value("harmonics", s.H);
  s.omega = j.value("omega", s.omega);
  s.sample_counts = j.value("sample_counts", s.sample_counts);
  s.trials = j.value("trials", s.trials);
  s.seed = j.value("seed", s.seed);
  s.jacobian_trials = j.value("jacobian_trials", s.jacobian_trials);
  s.timing_draws = j.value("timing_draws", s.timing_draws);
  s.timing_repetitions = j.value("timing_repetitions", s.timing_repetitions);
  s.amplitude = j.value("amplitude", s.amplitude);
  s.decay = j.value("decay", s.decay);
  s.offset = j.value("offset", s.offset);
  s.max_redraws = j.value("max_redraws", s.max_redraws);
  s.fd_step = j.value("fd_step", s.fd_step);
  return s;
}

}  // namespace detail

inline Json scenario_to_json(const Scenario& sc) {
  using namespace detail;
  Json s;
  s["name"] = sc.name;
  s["kind"] = to_string(sc.kind);
  s["description"] = sc.description;
  s["harmonics"] = sc.H;
  s["response"] = sc.response;
  switch (sc.kind) {
    case ScenarioKind::Frf:
    case ScenarioKind::Nnm:
    case ScenarioKind::OptCurve:
      s["continuation"] = continuation_to_json(sc.continuation);
      s["start"] = sc.start;
      s["start_omega"] = sc.start_omega;
      if (!sc.mode_shape.empty()) s["mode_shape"] = sc.mode_shape;
      if (!sc.sweep_parameter.empty()) s["sweep"] = Json{{"parameter", sc.sweep_parameter}, {"values", sc.sweep_values}};
      s["validate"] = Json{{"values", sc.validate_values}, {"points", sc.validate_points}, {"harmonics", sc.validate_H}};
      break;
    default: break;
  }
  if (sc.kind == ScenarioKind::OptCurve)
    s["taylor"] = Json{{"parameters", sc.perturbed},
                       {"perturbations", sc.perturbations},
                       {"tracked_state", sc.tracked_state},
                       {"tolerance", sc.taylor_tolerance}};
  if (sc.kind == ScenarioKind::Hysteresis) s["amplitudes"] = sc.amplitudes;
  if (sc.kind == ScenarioKind::AftCompare) s["aft"] = aft_to_json(sc.aft);
  Json j = system_to_json(sc.system);
  j["scenario"] = s;
  return j;
}

inline Scenario scenario_from_json(const Json& j) {
  using namespace detail;
  Scenario sc;
  sc.system = system_from_json(j);
  if (!j.contains("scenario")) throw Error(ErrorKind::InvalidDefinition, "file has no 'scenario' section");
  try {
    const Json& s = j["scenario"];
    sc.name = s.value("name", sc.system.name);
    sc.kind = scenario_kind_from_string(s.at("kind").get<std::string>());
    sc.description = s.value("description", std::string());
    sc.H = s.value("harmonics", sc.H);
    sc.response = s.value("response", sc.response);
    if (s.contains("continuation")) sc.continuation = continuation_from_json(s["continuation"]);
    sc.start = s.value("start", sc.start);
    sc.start_omega = s.value("start_omega", sc.start_omega);
    sc.mode_shape = s.value("mode_shape", sc.mode_shape);
    if (s.contains("sweep")) {
      sc.sweep_parameter = s["sweep"].at("parameter").get<std::string>();
      sc.sweep_values = s["sweep"].at("values").get<std::vector<double>>();
    }
    if (s.contains("validate")) {
      sc.validate_values = s["validate"].value("values", sc.validate_values);
      sc.validate_points = s["validate"].value("points", sc.validate_points);
      sc.validate_H = s["validate"].value("harmonics", sc.validate_H);
    }
    if (s.contains("taylor")) {
      const Json& t = s["taylor"];
      sc.perturbed = t.value("parameters", sc.perturbed);
      sc.perturbations = t.value("perturbations", sc.perturbations);
      sc.tracked_state = t.value("tracked_state", sc.tracked_state);
      sc.taylor_tolerance = t.value("tolerance", sc.taylor_tolerance);
    }
    sc.amplitudes = s.value("amplitudes", sc.amplitudes);
    if (s.contains("aft")) sc.aft = aft_from_json(s["aft"]);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidDefinition, std::string("malformed scenario section: ") + e.what());
  }
  if (sc.H < 1) throw Error(ErrorKind::InvalidDefinition, "harmonics must be at least 1");
  if (sc.response >= sc.system.dimension()) throw Error(ErrorKind::InvalidDefinition, "response component out of range");
  if (!sc.sweep_parameter.empty() && sc.system.parameter_index(sc.sweep_parameter) < 0)
    throw Error(ErrorKind::InvalidDefinition, "unknown sweep parameter '" + sc.sweep_parameter + "'");
  for (const auto& p : sc.perturbed)
    if (sc.system.parameter_index(p) < 0) throw Error(ErrorKind::InvalidDefinition, "unknown parameter '" + p + "'");
  return sc;
}

inline Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

inline void save_scenario(const std::string& path, const Scenario& sc) { write_json_file(path, scenario_to_json(sc)); }

// ---------------------------------------------------------------------------
// catalog

namespace detail {

inline MechanicalHost damped_two_dof(double c) {
  auto h = two_dof_host();
  h.D = c * Eigen::MatrixXd::Identity(2, 2);
  return h;
}

}  // namespace detail

inline Scenario cubic_nnm_scenario() {
  Scenario sc;
  sc.name = "cubic-nnm";
  sc.description = "Backbone of the in-phase mode of the 2-DOF host with a cubic spring on DOF 1 (no forcing)";
  sc.kind = ScenarioKind::Nnm;
  sc.system = assemble_first_order(two_dof_host(), std::nullopt, Attachment{elements::cubic_spring(0.5), {0}});
  sc.system.name = sc.name;
  sc.H = 7;
  sc.start = 0.05;
  sc.start_omega = 1.0;
  sc.mode_shape = {1.0, 1.0};
  sc.continuation.lambda_max = 3.0;
  sc.continuation.max_step = 0.1;
  sc.validate_points = {0.5, 1.0, 1.5};
  return sc;
}

inline Scenario pw_spring_frf_scenario() {
  Scenario sc;
  sc.name = "pw-spring-frf";
  sc.description = "Forced response of the 2-DOF host with the piecewise spring on DOF 1 around the second mode";
  sc.kind = ScenarioKind::Frf;
  sc.system = assemble_first_order(detail::damped_two_dof(0.05), Excitation{{1.0, 0.0}, 0.6},
                                   Attachment{elements::piecewise_spring(), {0}});
  sc.system.name = sc.name;
  sc.H = 7;
  sc.start = 1.5;
  sc.continuation.lambda_min = 1.5 - 1e-9;
  sc.continuation.lambda_max = 2.5;
  sc.continuation.max_step = 0.05;
  sc.continuation.max_points = 4000;
  sc.validate_points = {1.7, 2.0, 2.05, 2.1, 2.3};
  return sc;
}

inline Scenario coulomb_frf_scenario() {
  Scenario sc;
  sc.name = "coulomb-frf";
  sc.description = "Forced response of the undamped 2-DOF host with an elastic Coulomb element on DOF 1, forcing on DOF 2";
  sc.kind = ScenarioKind::Frf;
  sc.system = assemble_first_order(two_dof_host(), Excitation{{0.0, 1.0}, 0.02},
                                   Attachment{elements::coulomb(0.35, 0.05), {0}});
  sc.system.name = sc.name;
  sc.H = 7;
  sc.response = 1;
  sc.start = 0.6;
  sc.continuation.lambda_min = 0.6 - 1e-9;
  sc.continuation.lambda_max = 1.6;
  sc.continuation.max_step = 0.05;
  sc.continuation.max_points = 4000;
  sc.continuation.max_coefficient = 5.0;
  sc.sweep_parameter = "fc";
  sc.sweep_values = {0.01, 0.02, 0.05, 0.1, 0.2};
  sc.validate_values = {0.02};
  sc.validate_points = {0.9, 1.02, 1.06, 1.12, 1.16};
  return sc;
}

inline Scenario coulomb_optcurve_scenario() {
  Scenario sc;
  sc.name = "coulomb-optcurve";
  sc.description = "Phase-resonance amplitude of DOF 2 versus the friction limit, with Taylor predictions for "
                   "+-25% excitation level and tangential stiffness";
  sc.kind = ScenarioKind::OptCurve;
  sc.system = assemble_first_order(detail::damped_two_dof(0.01), Excitation{{0.0, 1.0}, 0.02},
                                   Attachment{elements::coulomb(0.35, 0.05), {0}});
  sc.system.name = sc.name;
  sc.H = 7;
  sc.response = 1;
  sc.start = 0.6;  // window searched for the first resonance
  sc.continuation.lambda_min = 0.6 - 1e-9;
  sc.continuation.lambda_max = 1.6;
  sc.continuation.max_step = 0.05;
  sc.continuation.max_points = 4000;
  sc.sweep_parameter = "fc";
  sc.sweep_values = {0.002, 0.005, 0.01, 0.02, 0.03, 0.05, 0.08, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5};
  sc.perturbed = {"eps", "kt"};
  sc.perturbations = {-0.25, 0.25};
  sc.tracked_state = 1;
  return sc;
}

inline Scenario sma_hysteresis_scenario() {
  Scenario sc;
  sc.name = "sma-hysteresis";
  sc.description = "Superelastic element under prescribed harmonic displacement: dissipation per cycle";
  sc.kind = ScenarioKind::Hysteresis;
  sc.system = elements::shape_memory_alloy(1.0, 1.0, 0.2, 1.0);
  sc.system.name = sc.name;
  sc.H = 15;
  sc.amplitudes = {0.25, 0.5, 0.75, 1.0, 1.1, 1.3, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0};
  return sc;
}

inline Scenario contact_frf_scenario() {
  Scenario sc;
  sc.name = "contact-frf";
  sc.description = "Forced response of the 2-DOF host (DOF 1 normal, DOF 2 tangential) with a preloaded frictional "
                   "contact, tangential forcing, normal preload sweep";
  sc.kind = ScenarioKind::Frf;
  sc.system = assemble_first_order(detail::damped_two_dof(0.02), Excitation{{0.0, 1.0}, 0.1},
                                   Attachment{elements::contact(1.0, 1.0, 0.3, 1.0), {0, 1}});
  sc.system.name = sc.name;
  sc.H = 7;
  sc.response = 1;
  sc.start = 0.5;
  sc.continuation.lambda_min = 0.5 - 1e-9;
  sc.continuation.lambda_max = 2.0;
  sc.continuation.max_step = 0.05;
  sc.continuation.max_points = 4000;
  sc.sweep_parameter = "g";
  sc.sweep_values = {0.2, 0.5, 1.0};
  sc.validate_points = {1.25, 1.4};
  return sc;
}

inline Scenario aft_compare_scenario() {
  Scenario sc;
  sc.name = "aft-compare";
  sc.description = "Analytic force coefficients versus AFT on random inputs to the frictional contact element";
  sc.kind = ScenarioKind::AftCompare;
  sc.system = elements::contact(1.0, 1.0, 0.3, 1.0);
  sc.system.name = sc.name;
  sc.H = 7;
  sc.aft.H = 7;
  sc.aft.trials = 1000;
  return sc;
}

inline std::vector<Scenario> scenario_catalog() {
  return {cubic_nnm_scenario(),     pw_spring_frf_scenario(),  coulomb_frf_scenario(), coulomb_optcurve_scenario(),
          sma_hysteresis_scenario(), contact_frf_scenario(), aft_compare_scenario()};
}

inline Scenario catalog_scenario(const std::string& name) {
  for (auto& sc : scenario_catalog())
    if (sc.name == name) return sc;
  throw Error(ErrorKind::InvalidArgument, "no scenario named '" + name + "'");
}

}  // namespace hbevent
