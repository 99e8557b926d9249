// hbevent command line front end.
//
//   hbevent <command> <scenario> [options]
//
// <scenario> is a scenario file, a bare system file, or a catalog name.
// Exit codes: 0 success, 1 module failure (error JSON on stderr), 2 usage
// error, 3 validation tolerance exceeded.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hbevent/elements.hpp"
#include "hbevent/studies.hpp"
#include "hbevent/svg.hpp"

namespace fs = std::filesystem;
using namespace hbevent;

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  std::string input;
  std::vector<std::string> params;
  int harmonics = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out = "hbevent-out";
  std::string format = "csv+svg";
  int threads = 0;
  int trials = 0;
  double tolerance = 1e-4;
  double omega = 0.0;
  int periods = 0;
  std::string initial;
};

struct Outputs {
  fs::path dir;
  std::string stem;
  bool svg = false;
  Json files = Json::array();

  std::string path(const std::string& suffix) const { return (dir / (stem + "_" + suffix)).string(); }

  std::ofstream open(const std::string& suffix, const std::string& schema) {
    const auto p = path(suffix);
    std::ofstream f(p);
    if (!f) throw Error(ErrorKind::IoError, "cannot write " + p);
    files.push_back({{"path", p}, {"schema", schema + "/" + std::to_string(kSchemaVersion)}});
    return f;
  }

  void chart(const std::string& suffix, const svg::Chart& c) {
    if (!svg) return;
    const auto p = path(suffix);
    svg::write_file(p, c);
    files.push_back({{"path", p}, {"schema", "svg"}});
  }
};

struct ModuleFailure {
  ErrorKind kind;
  std::string message;
};

int hardware_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

Scenario load_input(const std::string& arg, ScenarioKind fallback) {
  if (!fs::exists(arg)) {
    for (const auto& sc : scenario_catalog())
      if (sc.name == arg || sc.name + ".json" == arg) return sc;
  }
  const Json j = read_json_file(arg);
  if (j.contains("scenario")) return scenario_from_json(j);
  Scenario sc;
  sc.name = fs::path(arg).stem().string();
  sc.kind = fallback;
  sc.system = system_from_json(j);
  return sc;
}

void apply_overrides(Scenario& sc, const Options& o) {
  for (const auto& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::InvalidArgument, "--param expects NAME=VALUE, got '" + kv + "'");
    const std::string name = kv.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "--param value is not a number: '" + kv + "'");
    }
    sc.system.set_parameter(name, value);
    if (name == sc.sweep_parameter) sc.sweep_values = {value};
    if (name == sc.sweep_parameter) sc.validate_values.clear();
  }
  if (o.seed_set) sc.aft.seed = o.seed;
  if (o.trials > 0) sc.aft.trials = o.trials;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::string fmt(double v, const char* f = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string series_label(const Scenario& sc, const std::optional<double>& value) {
  if (!value) return sc.name;
  return sc.sweep_parameter + " = " + fmt(*value);
}

// ---------------------------------------------------------------------------

std::string run_frf(const Scenario& sc, const Options& o, Outputs& out, std::optional<ModuleFailure>& failure) {
  const auto branches = run_branches(sc, o.threads);
  {
    auto f = out.open("frf.csv", "branches");
    write_branches_csv(f, sc, branches);
  }
  svg::Chart c{sc.name, "Omega", "amplitude of " + sc.system.components[sc.response], svg::Scale::Linear,
               svg::Scale::Linear, {}};
  std::ostringstream msg;
  for (const auto& b : branches) {
    svg::Series s{series_label(sc, b.value), {}, {}};
    for (const auto& bp : b.run.branch) {
      s.x.push_back(bp.omega);
      s.y.push_back(harmonic_amplitude(b.problem, bp.u, sc.response));
    }
    c.series.push_back(std::move(s));
    msg << "  " << series_label(sc, b.value) << ": " << b.run.branch.size() << " points, " << count_folds(b.run)
        << " folds, termination " << to_string(b.run.termination) << '\n';
    if (b.run.termination == Termination::StepCollapse && !failure)
      failure = ModuleFailure{ErrorKind::StepCollapse, series_label(sc, b.value) + ": " + b.run.message};
  }
  out.chart("frf.svg", c);
  return msg.str();
}

std::string run_nnm(const Scenario& sc, const Options&, Outputs& out, std::optional<ModuleFailure>& failure) {
  const auto b = run_branch(sc);
  {
    auto f = out.open("nnm.csv", "branches");
    write_branches_csv(f, sc, {b});
  }
  svg::Series fep{"backbone", {}, {}}, bb{"backbone", {}, {}};
  if (sc.system.mechanical) {
    auto f = out.open("fep.csv", "fep");
    f << "amplitude,omega,energy\n";
    f.precision(17);
    for (const auto& bp : b.run.branch) {
      const double e = mechanical_energy(b.problem, bp.u);
      f << bp.lambda << ',' << bp.omega << ',' << e << '\n';
      fep.x.push_back(e);
      fep.y.push_back(bp.omega);
    }
    out.chart("fep.svg", {sc.name + " frequency-energy", "energy", "Omega", svg::Scale::Log, svg::Scale::Linear, {fep}});
  }
  for (const auto& bp : b.run.branch) {
    bb.x.push_back(bp.omega);
    bb.y.push_back(bp.lambda);
  }
  out.chart("backbone.svg", {sc.name + " backbone", "Omega", "amplitude", svg::Scale::Linear, svg::Scale::Linear, {bb}});
  if (b.run.termination == Termination::StepCollapse) failure = ModuleFailure{ErrorKind::StepCollapse, b.run.message};
  std::ostringstream msg;
  msg << "  " << b.run.branch.size() << " points, Omega " << fmt(b.run.branch.front().omega) << " to "
      << fmt(b.run.branch.back().omega) << ", termination " << to_string(b.run.termination) << '\n';
  return msg.str();
}

std::string run_optcurve_cmd(const Scenario& sc, const Options& o, Outputs& out) {
  const auto r = run_optcurve(sc, o.threads);
  {
    auto f = out.open("optcurve.csv", "optcurve");
    write_optcurve_csv(f, r);
  }
  svg::Chart c{sc.name + " resonance amplitude", r.parameter, "amplitude", svg::Scale::Auto, svg::Scale::Linear, {}};
  svg::Series base{"recomputed", {}, {}, true};
  for (const auto& p : r.points) {
    base.x.push_back(p.value);
    base.y.push_back(p.amplitude);
  }
  c.series.push_back(base);
  std::vector<std::pair<std::string, double>> keys;
  for (const auto& p : r.points)
    for (const auto& tc : p.cases)
      if (std::find(keys.begin(), keys.end(), std::make_pair(tc.parameter, tc.relative)) == keys.end())
        keys.emplace_back(tc.parameter, tc.relative);
  for (const auto& [name, rel] : keys) {
    svg::Series pred{name + " " + fmt(100.0 * rel, "%+.0f") + "% predicted", {}, {}};
    svg::Series re{name + " " + fmt(100.0 * rel, "%+.0f") + "% recomputed", {}, {}};
    for (const auto& p : r.points)
      for (const auto& tc : p.cases)
        if (tc.parameter == name && tc.relative == rel) {
          pred.x.push_back(p.value);
          pred.y.push_back(tc.predicted_2);
          re.x.push_back(p.value);
          re.y.push_back(tc.recomputed);
        }
    c.series.push_back(pred);
    c.series.push_back(re);
  }
  out.chart("optcurve.svg", c);

  std::ostringstream msg;
  if (!r.points.empty()) {
    const auto* best = &r.points[r.argmin()];
    msg << "  minimum amplitude " << fmt(best->amplitude) << " at " << r.parameter << " = " << fmt(best->value) << '\n';
  }
  double worst = 0.0;
  for (const auto* p : mid_range(r))
    for (const auto& tc : p->cases)
      if (std::isfinite(tc.error_2)) worst = std::max(worst, std::abs(tc.error_2));
  msg << "  mid-range max second-order error " << fmt(100.0 * worst, "%.2f") << "%\n";
  for (const auto& p : r.points)
    if (p.diverged()) {
      msg << "  Taylor prediction fails at " << r.parameter << " = " << fmt(p.value) << ":";
      for (const auto& tc : p.cases)
        if (!tc.flag.empty()) msg << ' ' << tc.parameter << fmt(100.0 * tc.relative, "%+.0f") << "% (" << tc.flag << ")";
      msg << '\n';
    }
  for (const auto& f : r.failures) msg << "  not reached: " << f << '\n';
  return msg.str();
}

// Solution at one point with second-order sensitivities, schedule and force spectra.
std::string run_point_sensitivity(const Scenario& sc, const Options& o, Outputs& out) {
  HBProblem p;
  HBSolution sol;
  if (sc.kind == ScenarioKind::Nnm) {
    p = nnm_problem(sc, sc.H);
    const double a = o.omega > 0.0 ? o.omega : sc.start;
    sol = newton_solve(p, nnm_guess(p, sc, a), {}, a);
  } else {
    // first crossing of the branch, so that points past folds are reachable
    const auto br = run_branch(sc);
    const double w = o.omega > 0.0 ? o.omega : sc.start;
    const auto guess = detail::branch_point_at(br.run, w);
    if (!guess) throw Error(ErrorKind::InvalidArgument, "Omega = " + fmt(w) + " is not on the branch");
    p = br.problem;
    p.omega = w;
    sol = newton_solve(p, *guess);
  }
  std::vector<SensitivityVariable> vars{omega_variable(p)};
  for (const auto& [name, v] : p.sys.parameters) vars.push_back(parameter_variable(p, name));
  const auto b = d2F(p, sol.u, vars);
  {
    auto f = out.open("sensitivity.csv", "sensitivity");
    write_sensitivity_csv(f, p, b);
  }
  {
    auto f = out.open("schedule.csv", "schedule");
    write_schedule_csv(f, sol.schedule, p.sys);
  }
  {
    auto f = out.open("force.csv", "force");
    write_force_csv(f, p.sys, force_coefficients(p.sys, unpack_series(p, sol.u), sol.omega, p.H));
  }
  std::ostringstream msg;
  msg << "  Omega " << fmt(sol.omega) << ", amplitude " << fmt(harmonic_amplitude(p, sol.u, sc.response)) << ", "
      << sol.schedule.entries.size() << " schedule entries, " << vars.size() << " variables\n";
  return msg.str();
}

std::string run_aft(const Scenario& sc, const Options& o, Outputs& out) {
  CompareSettings s = sc.aft;
  if (o.harmonics > 0) s.H = o.harmonics;
  s.threads = o.threads;
  const auto r = compare_methods(sc.system, s);
  {
    auto f = out.open("aft.csv", "aft-compare");
    write_compare_csv(f, r);
  }
  svg::Series err{"mean force error", {}, {}, true}, jac{"mean FD Jacobian error", {}, {}, true};
  svg::Series ratio{"T_AFT / T_analytic", {}, {}, true}, one{"equal cost", {}, {}};
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& w = r.rows[i];
    err.x.push_back(w.N_td);
    err.y.push_back(w.err_mean);
    if (w.jac_fd_mean > 0.0) {
      jac.x.push_back(w.N_td);
      jac.y.push_back(w.jac_fd_mean);
    }
    ratio.x.push_back(w.N_td);
    ratio.y.push_back(w.ratio_force);
    one.x.push_back(w.N_td);
    one.y.push_back(1.0);
  }
  out.chart("aft_error.svg", {sc.name + " AFT error", "N_td", "relative error", svg::Scale::Log, svg::Scale::Log, {err, jac}});
  out.chart("aft_cost.svg", {sc.name + " AFT cost", "N_td", "cost ratio", svg::Scale::Log, svg::Scale::Log, {ratio, one}});
  std::ostringstream msg;
  print_compare_summary(msg, r);
  return msg.str();
}

std::string run_oracle(const Scenario& sc, const Options& o, Outputs& out) {
  const auto n = static_cast<Eigen::Index>(sc.system.dimension());
  OracleStart start;
  start.y = Eigen::VectorXd::Zero(n);
  if (!o.initial.empty()) {
    const auto v = parse_list(o.initial);
    if (static_cast<Eigen::Index>(v.size()) != n)
      throw Error(ErrorKind::InvalidArgument, "--initial needs " + std::to_string(n) + " values");
    for (Eigen::Index i = 0; i < n; ++i) start.y(i) = v[static_cast<std::size_t>(i)];
  } else if (sc.kind == ScenarioKind::Nnm && sc.mode_shape.size() * 2 == sc.system.dimension()) {
    for (std::size_t i = 0; i < sc.mode_shape.size(); ++i)
      start.y(static_cast<Eigen::Index>(i)) = sc.start * sc.mode_shape[i] / sc.mode_shape[0];
  }
  double omega = o.omega;
  if (omega <= 0.0) omega = sc.kind == ScenarioKind::Nnm ? sc.start_omega : sc.start;
  if (omega <= 0.0) omega = 1.0;
  OracleSettings s;
  if (o.periods > 0) s.periods = o.periods;
  s.require_steady = false;
  const auto tr = integrate_to_steady_state(sc.system, omega, start, s);
  const int H = o.harmonics > 0 ? o.harmonics : sc.H;
  const auto F = fourier_of_last_period(tr, H);
  {
    auto f = out.open("trajectory.csv", "trajectory");
    write_trajectory_csv(f, sc.system, tr);
  }
  {
    auto f = out.open("events.csv", "events");
    write_events_csv(f, sc.system, tr.events);
  }
  {
    auto f = out.open("harmonics.csv", "force");
    write_force_csv(f, sc.system, F);
  }
  svg::Chart c{sc.name + " last period", "tau", "y", svg::Scale::Linear, svg::Scale::Linear, {}};
  for (Eigen::Index i = 0; i < n; ++i) c.series.push_back({sc.system.components[static_cast<std::size_t>(i)], {}, {}});
  for (int k = 0; k <= 256; ++k) {
    const double tau = tr.tau_start + kTwoPi * k / 256;
    const Eigen::VectorXd y = tr.at(tau);
    for (Eigen::Index i = 0; i < n; ++i) {
      c.series[static_cast<std::size_t>(i)].x.push_back(tau - tr.tau_start);
      c.series[static_cast<std::size_t>(i)].y.push_back(y(i));
    }
  }
  out.chart("trajectory.svg", c);
  std::ostringstream msg;
  msg << "  Omega " << fmt(omega) << ", " << tr.periods << " periods, " << (tr.steady ? "steady" : "not settled")
      << " (period change " << fmt(tr.period_change, "%.2e") << "), " << tr.events.size()
      << " events in the last period, amplitude " << fmt(2.0 * std::abs(F[sc.response][1])) << '\n';
  return msg.str();
}

std::string run_validate(const Scenario& sc, const Options& o, Outputs& out, bool& pass) {
  Scenario v = sc;
  if (o.harmonics > 0) v.validate_H = o.harmonics;
  const auto cases = validate_scenario(v, o.threads);
  {
    auto f = out.open("validation.csv", "validation");
    write_validation_csv(f, cases);
  }
  double worst = 0.0;
  pass = !cases.empty();
  std::ostringstream msg;
  for (const auto& c : cases) {
    if (!c.error.empty())
      worst = std::numeric_limits<double>::infinity();
    else
      worst = std::max(worst, c.relative_error);
    pass = pass && c.pass(o.tolerance);
    msg << "  " << (c.value ? sc.sweep_parameter + " = " + fmt(*c.value) + ", " : std::string()) << "point "
        << fmt(c.point) << ": relative error " << fmt(c.relative_error, "%.2e") << ", states "
        << (c.same_states ? "match" : "differ") << (c.error.empty() ? "" : ", error: " + c.error) << '\n';
  }
  msg << "  max harmonic-1 mismatch " << fmt(worst, "%.3e") << " (tolerance " << fmt(o.tolerance, "%.0e") << "): "
      << (pass ? "pass" : "fail") << '\n';
  return msg.str();
}

std::string run_hysteresis_cmd(const Scenario& sc, Outputs& out) {
  const auto pts = run_hysteresis(sc);
  {
    auto f = out.open("hysteresis.csv", "hysteresis");
    write_hysteresis_csv(f, pts);
  }
  svg::Series w{"dissipation per cycle", {}, {}, true}, eta{"loss factor", {}, {}, true};
  for (const auto& h : pts) {
    w.x.push_back(h.amplitude);
    w.y.push_back(h.dissipation);
    eta.x.push_back(h.amplitude);
    eta.y.push_back(h.loss_factor);
  }
  out.chart("dissipation.svg", {sc.name + " dissipation", "amplitude", "W", svg::Scale::Auto, svg::Scale::Linear, {w}});
  out.chart("loss_factor.svg", {sc.name + " loss factor", "amplitude", "W / (2 pi E)", svg::Scale::Auto, svg::Scale::Linear, {eta}});
  std::ostringstream msg;
  const auto peak = std::max_element(pts.begin(), pts.end(),
                                     [](const auto& a, const auto& b) { return a.loss_factor < b.loss_factor; });
  if (peak != pts.end())
    msg << "  " << pts.size() << " amplitudes, peak loss factor " << fmt(peak->loss_factor) << " at amplitude "
        << fmt(peak->amplitude) << '\n';
  return msg.str();
}

std::string run_catalog(const Options& o) {
  const fs::path dir(o.out);
  fs::create_directories(dir / "scenarios");
  fs::create_directories(dir / "systems");
  std::ostringstream msg;
  for (const auto& sc : scenario_catalog()) {
    const auto p = dir / "scenarios" / (sc.name + ".json");
    save_scenario(p.string(), sc);
    msg << "  " << p.string() << '\n';
  }
  for (const auto& [stem, sys] : elements::builtin()) {
    const auto p = dir / "systems" / (stem + ".json");
    write_json_file(p.string(), system_to_json(sys));
    msg << "  " << p.string() << '\n';
  }
  return msg.str();
}

void print_error(const std::string& command, ErrorKind kind, const std::string& message) {
  Json e{{"error", {{"kind", std::string(to_string(kind))}, {"message", message}, {"command", command}}}};
  std::cerr << e.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic balance for piecewise-polynomial systems with distinct states"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool needs_input) {
    if (needs_input) c->add_option("scenario", o.input, "Scenario file, bare system file or catalog name")->required();
    c->add_option("--param", o.params, "Parameter override NAME=VALUE (repeatable)");
    c->add_option("--harmonics", o.harmonics, "Number of harmonics H")->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "Output directory");
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "csv+svg"}));
    c->add_option("--threads", o.threads, "Worker threads (default: hardware concurrency)")->check(CLI::PositiveNumber);
  };

  auto* frf = app.add_subcommand("frf", "Forced response branches by continuation, one per sweep value");
  common(frf, true);
  auto* nnm = app.add_subcommand("nnm", "Backbone of an autonomous system with its frequency-energy plot");
  common(nnm, true);
  auto* sens = app.add_subcommand("sens", "Taylor study of the optimisation curve, or sensitivities at one point");
  common(sens, true);
  sens->add_option("--at", o.omega, "Omega (forced) or amplitude (autonomous) of the point, for non-optcurve scenarios");
  auto* aft = app.add_subcommand("aft-compare", "Exact force evaluation against the sampled AFT baseline");
  common(aft, true);
  aft->add_option("--trials", o.trials, "Random draws")->check(CLI::PositiveNumber);
  aft->add_option("--seed", o.seed, "Random seed")->each([&](const std::string&) { o.seed_set = true; });
  auto* oracle = app.add_subcommand("oracle", "Event-driven time integration to steady state");
  common(oracle, true);
  oracle->add_option("--omega", o.omega, "Excitation frequency");
  oracle->add_option("--periods", o.periods, "Maximum number of periods")->check(CLI::PositiveNumber);
  oracle->add_option("--initial", o.initial, "Initial state y, comma separated");
  auto* validate = app.add_subcommand("validate", "HBM against the time oracle at the scenario's validation points");
  common(validate, true);
  validate->add_option("--tolerance", o.tolerance, "Relative tolerance on the harmonic-1 amplitude");
  auto* hyst = app.add_subcommand("hysteresis", "Dissipation of an element under prescribed harmonic motion");
  common(hyst, true);
  auto* catalog = app.add_subcommand("catalog", "Write the scenario catalog and builtin systems as JSON");
  catalog->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  if (o.threads <= 0) o.threads = hardware_threads();

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  try {
    if (cmd == catalog) {
      std::cout << "catalog\n" << run_catalog(o);
      return 0;
    }
    ScenarioKind fallback = ScenarioKind::Frf;
    if (cmd == nnm) fallback = ScenarioKind::Nnm;
    if (cmd == aft) fallback = ScenarioKind::AftCompare;
    if (cmd == hyst) fallback = ScenarioKind::Hysteresis;
    Scenario sc = load_input(o.input, fallback);
    apply_overrides(sc, o);
    if (o.harmonics > 0 && cmd != aft && cmd != validate) sc.H = o.harmonics;

    Outputs out;
    out.dir = o.out;
    out.stem = sc.name;
    out.svg = o.format == "csv+svg";
    fs::create_directories(out.dir);

    std::optional<ModuleFailure> failure;
    bool pass = true;
    std::string summary;
    if (cmd == frf)
      summary = run_frf(sc, o, out, failure);
    else if (cmd == nnm)
      summary = run_nnm(sc, o, out, failure);
    else if (cmd == sens)
      summary = sc.kind == ScenarioKind::OptCurve ? run_optcurve_cmd(sc, o, out) : run_point_sensitivity(sc, o, out);
    else if (cmd == aft)
      summary = run_aft(sc, o, out);
    else if (cmd == oracle)
      summary = run_oracle(sc, o, out);
    else if (cmd == validate)
      summary = run_validate(sc, o, out, pass);
    else if (cmd == hyst)
      summary = run_hysteresis_cmd(sc, out);

    const double seconds = std::chrono::duration<double>(clock::now() - t0).count();
    Json manifest{{"schema_version", kSchemaVersion},
                  {"command", name},
                  {"scenario", sc.name},
                  {"parameters", sc.system.parameters},
                  {"harmonics", sc.H},
                  {"seed", sc.aft.seed},
                  {"threads", o.threads},
                  {"seconds", seconds},
                  {"files", out.files}};
    const auto mpath = out.path(name + "_manifest.json");
    write_json_file(mpath, manifest);

    std::cout << name << ' ' << sc.name << " (" << fmt(seconds, "%.2f") << " s)\n" << summary;
    for (const auto& f : out.files) std::cout << "  wrote " << f["path"].get<std::string>() << '\n';
    std::cout << "  wrote " << mpath << '\n';
    if (failure) {
      print_error(name, failure->kind, failure->message);
      return 1;
    }
    return pass ? 0 : 3;
  } catch (const Error& e) {
    print_error(name, e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(name, ErrorKind::InvalidArgument, e.what());
    return 1;
  }
}
