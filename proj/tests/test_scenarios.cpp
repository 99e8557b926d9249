#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "hbevent/studies.hpp"

using namespace hbevent;

TEST(Scenarios, CatalogRoundTripsThroughJson) {
  for (const auto& sc : scenario_catalog()) {
    const auto j = scenario_to_json(sc);
    const auto back = scenario_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back.system, sc.system) << sc.name;
    EXPECT_EQ(scenario_to_json(back).dump(), j.dump()) << sc.name;
    const auto again = scenario_from_json(scenario_to_json(back));
    EXPECT_EQ(again.system, back.system) << sc.name;
  }
}

TEST(Scenarios, ShippedFilesMatchCatalog) {
  const std::filesystem::path dir = std::filesystem::path(HBEVENT_SOURCE_DIR) / "scenarios";
  for (const auto& sc : scenario_catalog()) {
    const auto path = dir / (sc.name + ".json");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    const auto file = load_scenario(path.string());
    EXPECT_EQ(scenario_to_json(file).dump(), scenario_to_json(sc).dump()) << sc.name;
  }
}

TEST(Scenarios, CatalogNamesAndKeyValues) {
  const auto frf = catalog_scenario("coulomb-frf");
  EXPECT_EQ(frf.system.parameter("kt"), 0.35);
  const auto opt = catalog_scenario("coulomb-optcurve");
  EXPECT_EQ(opt.perturbed, (std::vector<std::string>{"eps", "kt"}));
  EXPECT_EQ(opt.perturbations, (std::vector<double>{-0.25, 0.25}));
  const auto aft = catalog_scenario("aft-compare");
  EXPECT_EQ(aft.aft.H, 7);
  EXPECT_EQ(aft.aft.trials, 1000);
  EXPECT_THROW(catalog_scenario("nope"), Error);
}

TEST(Scenarios, MalformedSectionsAreRejected) {
  auto j = scenario_to_json(catalog_scenario("coulomb-frf"));
  auto expect_invalid = [](const Json& doc) {
    try {
      scenario_from_json(doc);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidDefinition);
    }
  };
  auto bad = j;
  bad["scenario"]["kind"] = "spectrogram";
  expect_invalid(bad);
  bad = j;
  bad["scenario"]["sweep"]["parameter"] = "nu";
  expect_invalid(bad);
  bad = j;
  bad["scenario"]["response"] = 9;
  expect_invalid(bad);
  bad = j;
  bad.erase("scenario");
  expect_invalid(bad);
}

TEST(Scenarios, BackboneFrequencyIncreasesWithAmplitudeAndEnergy) {
  auto sc = catalog_scenario("cubic-nnm");
  sc.continuation.lambda_max = 1.5;
  const auto b = run_branch(sc);
  ASSERT_EQ(b.run.termination, Termination::RangeExit);
  double prev_e = 0.0;
  for (std::size_t i = 1; i < b.run.branch.size(); ++i) {
    EXPECT_GT(b.run.branch[i].omega, b.run.branch[i - 1].omega);
    const double e = mechanical_energy(b.problem, b.run.branch[i].u);
    EXPECT_GT(e, prev_e);
    prev_e = e;
  }
}

TEST(Scenarios, LinearModeEnergy) {
  // linear in-phase mode x = (a, a) cos t: energy x' K x / 2 = a^2 at t = 0
  auto sc = catalog_scenario("cubic-nnm");
  sc.system.set_parameter("knl", 0.0);
  auto p = nnm_problem(sc, 3);
  const auto sol = newton_solve(p, nnm_guess(p, sc, 0.2), {}, 0.2);
  EXPECT_NEAR(mechanical_energy(p, sol.u), 0.2 * 0.2, 1e-12);
}

TEST(Scenarios, PiecewiseSpringSoftensThenStiffens) {
  const auto b = run_branch(catalog_scenario("pw-spring-frf"));
  EXPECT_EQ(b.run.termination, Termination::RangeExit);
  EXPECT_GE(count_folds(b.run), 2);
}

TEST(Scenarios, ContactBranchCrossesStickSlipBoundaries) {
  auto sc = catalog_scenario("contact-frf");
  for (const auto& b : run_branches(sc)) EXPECT_EQ(b.run.termination, Termination::RangeExit) << *b.value;
}

TEST(Scenarios, FreeLimitIsCappedByAmplitude) {
  auto sc = catalog_scenario("coulomb-frf");
  const auto b = run_branch(sc, 0.01);
  EXPECT_EQ(b.run.termination, Termination::AmplitudeCap);
  std::ostringstream os;
  write_branches_csv(os, sc, {b});
  EXPECT_EQ(os.str().rfind("fc,omega,lambda,", 0), 0u);
}

TEST(Scenarios, ParameterTrackingReturnsToStart) {
  const auto sc = catalog_scenario("coulomb-optcurve");
  const auto u0 = locate_phase_resonance(sc);
  HBProblem q = resonance_problem(sc);
  const auto u1 = track_parameter(q, u0, "fc", 0.1);
  EXPECT_EQ(q.sys.parameter("fc"), 0.1);
  const auto u2 = track_parameter(q, u1, "fc", 0.05);
  EXPECT_LT((u2 - u0).lpNorm<Eigen::Infinity>(), 1e-8);
  EXPECT_NEAR(u0(static_cast<Eigen::Index>(q.re_index(0, 1))), 0.0, 1e-12);
}

TEST(Scenarios, HysteresisDissipationThresholdAndSaturation) {
  const auto pts = run_hysteresis(catalog_scenario("sma-hysteresis"));
  ASSERT_GT(pts.size(), 5u);
  for (const auto& h : pts) {
    if (h.amplitude < 1.2) {
      EXPECT_NEAR(h.dissipation, 0.0, 1e-12) << h.amplitude;
    } else {
      EXPECT_GT(h.dissipation, 0.0) << h.amplitude;
    }
  }
  EXPECT_LT(pts.back().loss_factor, pts[pts.size() - 2].loss_factor);
  // fully transformed loop: two plateaus of height 2 fc over strain a
  EXPECT_NEAR(pts.back().dissipation, 4.0 * 0.2 * 1.0, 1e-9);
}

TEST(Scenarios, CubicValidationMatchesOracle) {
  const auto cases = validate_scenario(catalog_scenario("cubic-nnm"));
  ASSERT_EQ(cases.size(), 3u);
  for (const auto& c : cases) {
    EXPECT_TRUE(c.pass(1e-4)) << c.point << " " << c.relative_error << " " << c.error;
  }
  std::ostringstream os;
  write_validation_csv(os, cases);
  EXPECT_EQ(os.str().rfind("value,point,omega,amplitude_hbm,amplitude_ode,relative_error,", 0), 0u);
}

TEST(Scenarios, ParallelSweepMatchesSerial) {
  auto sc = catalog_scenario("contact-frf");
  sc.continuation.lambda_max = 1.0;
  const auto a = run_branches(sc, 1), b = run_branches(sc, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].run.branch.size(), b[i].run.branch.size());
    EXPECT_EQ(a[i].run.branch.back().u, b[i].run.branch.back().u);
  }
}
