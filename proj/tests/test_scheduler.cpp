#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "hbevent/scheduler.hpp"
#include "hbevent/systems.hpp"
#include "oracles.hpp"

using namespace hbevent;
constexpr double pi = std::numbers::pi;

namespace {

void expect_valid(const TransitionSchedule& s, const SystemDefinition& sys) {
  ASSERT_TRUE(s.converged);
  ASSERT_FALSE(s.entries.empty());
  EXPECT_GE(s.entries.front().tau_minus, 0.0);
  EXPECT_LT(s.entries.front().tau_minus, kTwoPi);
  EXPECT_DOUBLE_EQ(s.entries.back().tau_plus, s.entries.front().tau_minus + kTwoPi);
  for (std::size_t j = 0; j < s.size(); ++j) {
    EXPECT_GT(s.entries[j].tau_plus, s.entries[j].tau_minus);
    if (j + 1 < s.size()) {
      EXPECT_EQ(s.entries[j].tau_plus, s.entries[j + 1].tau_minus);
      const auto& st = sys.states[s.entries[j].state_index];
      EXPECT_NE(std::find(st.successors.begin(), st.successors.end(), s.entries[j + 1].state_id), st.successors.end());
    }
  }
}

double wrap(double t) {
  double r = std::fmod(t, kTwoPi);
  return r < 0 ? r + kTwoPi : r;
}

}  // namespace

TEST(Scheduler, SingleStateSystem) {
  auto sys = elements::cubic_spring();
  auto s = find_periodic_schedule(sys, {FourierSeries::cosine(1, 2.0)}, 1.0);
  expect_valid(s, sys);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entries[0].state_id, 1);
}

TEST(Scheduler, CoulombClosedForm) {
  for (auto [kt, fc] : {std::pair{0.35, 0.1}, std::pair{1.0, 0.3}, std::pair{2.0, 0.05}}) {
    auto sys = elements::coulomb(kt, fc);
    auto s = find_periodic_schedule(sys, {FourierSeries::cosine()}, 1.0);
    expect_valid(s, sys);
    ASSERT_EQ(s.size(), 4u);
    const double slip_phase = std::acos(1.0 - 2.0 * fc / kt);
    int matches = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      EXPECT_EQ(s.entries[j].state_id, s.entries[(j + 1) % 4].state_id == 1 ? 2 : 1);
      if (s.entries[j].state_id == 2) {
        const double t = wrap(s.entries[j].tau_minus);
        if (std::abs(t - slip_phase) < 1e-8 || std::abs(t - (pi + slip_phase)) < 1e-8) ++matches;
        const double e = wrap(s.entries[j].tau_plus);
        EXPECT_TRUE(std::abs(e - pi) < 1e-10 || std::abs(e) < 1e-10 || std::abs(e - kTwoPi) < 1e-10);
      }
    }
    EXPECT_EQ(matches, 2);
  }
}

TEST(Scheduler, PiecewiseSpringSmallAmplitude) {
  auto sys = elements::piecewise_spring();
  auto s = find_periodic_schedule(sys, {FourierSeries::cosine(1, 0.8)}, 1.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entries[0].state_id, 1);
}

TEST(Scheduler, PiecewiseSpringLargeAmplitude) {
  auto sys = elements::piecewise_spring();
  auto s = find_periodic_schedule(sys, {FourierSeries::constant(1.5) + FourierSeries::cosine(1, 2.0)}, 1.0);
  expect_valid(s, sys);
  EXPECT_EQ(s.size(), 4u);
  auto c = SeriesContext::values(sys, {FourierSeries::constant(1.5) + FourierSeries::cosine(1, 2.0)}, 1.0);
  EXPECT_LT(continuity_defect(c, s), 1e-12);
}

TEST(Scheduler, InitialStateResolution) {
  auto coul = elements::coulomb();
  auto r = resolve_initial_state(coul, {FourierSeries()}, 0.0);
  EXPECT_EQ(r.state_id, 1);
  EXPECT_EQ(r.internal[0], 0.0);

  auto pw = elements::piecewise_spring();
  EXPECT_EQ(resolve_initial_state(pw, {FourierSeries::constant(2.5)}, 0.0).state_id, 2);
  EXPECT_EQ(resolve_initial_state(pw, {FourierSeries::constant(3.5)}, 0.0).state_id, 3);

  auto ct = elements::contact(1.0, 1.0, 0.3, 1.0);
  EXPECT_EQ(resolve_initial_state(ct, {FourierSeries::constant(-2.0), FourierSeries()}, 0.0).state_id, 1);
  EXPECT_EQ(resolve_initial_state(ct, {FourierSeries::constant(0.5), FourierSeries()}, 0.0).state_id, 2);
}

TEST(Scheduler, TimeShiftInvariance) {
  auto sys = elements::coulomb(0.35, 0.1);
  std::vector<cplx> c{cplx(0.1, -0.05), cplx(0.5, -0.2), cplx(0.1, 0.0), cplx(0.5, 0.2), cplx(0.1, 0.05)};
  auto x = FourierSeries::from_coefficients(c, true);
  auto s0 = find_periodic_schedule(sys, {x}, 1.0);
  ASSERT_GT(s0.size(), 1u);
  for (double delta : {0.1, 1.0, pi}) {
    std::vector<cplx> cs(c.size());
    for (int n = -2; n <= 2; ++n) cs[static_cast<std::size_t>(n + 2)] = c[static_cast<std::size_t>(n + 2)] * std::polar(1.0, n * delta);
    auto s1 = find_periodic_schedule(sys, {FourierSeries::from_coefficients(cs, true)}, 1.0);
    ASSERT_EQ(s1.size(), s0.size());
    // match each entry by state and shifted phase
    for (const auto& e : s0.entries) {
      bool found = false;
      for (const auto& f : s1.entries) {
        double d = std::abs(wrap(f.tau_minus + delta) - wrap(e.tau_minus));
        d = std::min(d, kTwoPi - d);
        if (f.state_id == e.state_id && d < 1e-9) found = true;
      }
      EXPECT_TRUE(found);
    }
  }
}

TEST(Scheduler, Deterministic) {
  auto sys = elements::shape_memory_alloy();
  auto y = FourierSeries::cosine(1, 3.0) + FourierSeries::sine(2, 0.4);
  auto a = find_periodic_schedule(sys, {y}, 1.0);
  auto b = find_periodic_schedule(sys, {y}, 1.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a.entries[j].tau_minus, b.entries[j].tau_minus);
    EXPECT_EQ(a.entries[j].state_id, b.entries[j].state_id);
  }
}

TEST(Scheduler, ShapeMemoryAlloyLoops) {
  auto sys = elements::shape_memory_alloy(1.0, 1.0, 0.2, 1.0);
  // below the transformation threshold: purely elastic
  auto small = find_periodic_schedule(sys, {FourierSeries::cosine(1, 1.1)}, 1.0);
  ASSERT_EQ(small.size(), 1u);
  EXPECT_EQ(small.entries[0].state_id, 1);
  // partial transformation: 1 -> 2 -> 5 -> 4 -> 1 on each side
  auto mid = find_periodic_schedule(sys, {FourierSeries::cosine(1, 1.8)}, 1.0);
  expect_valid(mid, sys);
  auto cm = SeriesContext::values(sys, {FourierSeries::cosine(1, 1.8)}, 1.0);
  EXPECT_LT(continuity_defect(cm, mid), 1e-10);
  // full transformation reaches the martensite branch
  auto big = find_periodic_schedule(sys, {FourierSeries::cosine(1, 4.0)}, 1.0);
  expect_valid(big, sys);
  auto seq = big.state_sequence();
  EXPECT_NE(std::find(seq.begin(), seq.end(), 3), seq.end());
  auto cb = SeriesContext::values(sys, {FourierSeries::cosine(1, 4.0)}, 1.0);
  EXPECT_LT(continuity_defect(cb, big), 1e-10);
}

TEST(Scheduler, ContactElement) {
  auto sys = elements::contact(1.0, 1.0, 0.3, 0.2);
  std::vector<FourierSeries> y{FourierSeries::cosine(1, 1.0), FourierSeries::sine(1, 1.0)};
  auto s = find_periodic_schedule(sys, y, 1.0);
  expect_valid(s, sys);
  auto seq = s.state_sequence();
  EXPECT_NE(std::find(seq.begin(), seq.end(), 1), seq.end());
  auto c = SeriesContext::values(sys, y, 1.0);
  EXPECT_LT(continuity_defect(c, s), 1e-10);
}

TEST(Scheduler, CsvOutput) {
  auto sys = elements::coulomb();
  auto s = find_periodic_schedule(sys, {FourierSeries::cosine()}, 1.0);
  std::ostringstream os;
  write_schedule_csv(os, s, sys);
  EXPECT_EQ(os.str().substr(0, 29), "state,tau_minus,tau_plus,v1,v");
}
