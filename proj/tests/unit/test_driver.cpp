#include <gtest/gtest.h>

#include <cmath>

#include "delam/driver.hpp"
#include "delam/error.hpp"
#include "support.hpp"

using namespace delam;
using namespace delam::test;

TEST(Adaptive, GenerousGateHalvesBothParameters) {
  DriverConfig cfg{25e-3, kT / 25, 3e-3, 1e6};
  std::vector<AdaptiveDecision> seen;
  const AdaptiveResult r = run_adaptive(cfg, slider(), [&](const AdaptiveDecision& d) { seen.push_back(d); });
  ASSERT_EQ(r.accepted.size(), 4u);
  ASSERT_EQ(r.trace.size(), 4u);
  EXPECT_EQ(seen.size(), 4u);
  for (std::size_t i = 0; i < r.accepted.size(); ++i) {
    EXPECT_DOUBLE_EQ(r.accepted[i].chi, 25e-3 / std::pow(2.0, i));
    EXPECT_DOUBLE_EQ(r.accepted[i].tau, kT / 25 / std::pow(2.0, i));
    EXPECT_TRUE(r.trace[i].accepted);
  }
  EXPECT_EQ(r.gate_C, 1e6);
}

TEST(Adaptive, NothingToDoWhenAlreadyFinal) {
  const AdaptiveResult r = run_adaptive({1e-3, 1e-2, 1e-3}, slider());
  EXPECT_TRUE(r.accepted.empty());
  EXPECT_TRUE(r.trace.empty());
}

TEST(Adaptive, InvalidConfigRejected) {
  EXPECT_THROW(run_adaptive({0.0, 1e-2, 1e-3}, slider()), std::invalid_argument);
  EXPECT_THROW(run_adaptive({1e-2, 1e-2, 1e-3, -1.0}, slider()), std::invalid_argument);
}

TEST(Adaptive, PilotGateHoldsOnEveryAcceptedRun) {
  DriverConfig cfg{25e-3, kT / 50, 1.5e-3};
  const AdaptiveResult r = run_adaptive(cfg, slider());
  ASSERT_EQ(r.accepted.size(), 5u);
  EXPECT_GT(r.gate_C, 0.0);
  double prev_tau = 1e300;
  for (const auto& run : r.accepted) {
    EXPECT_LE(run.norms.l1, r.gate_C * run.chi);
    EXPECT_LE(run.tau, prev_tau);
    prev_tau = run.tau;
  }
  for (const auto& d : r.trace) EXPECT_EQ(d.accepted, d.l1 <= d.gate);
  EXPECT_DOUBLE_EQ(r.accepted.back().chi, 25e-3 / 16);
}

TEST(Adaptive, UnreachableGateAborts) {
  DriverConfig cfg{25e-3, kT / 10, 1e-3, 1e-12};
  cfg.max_tau_halvings = 2;
  int calls = 0;
  try {
    run_adaptive(cfg, slider(), [&](const AdaptiveDecision&) { ++calls; });
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("max_tau_halvings"), std::string::npos);
  }
  EXPECT_EQ(calls, 3);
}

TEST(Sweep, SinglePairMatchesDirectRun) {
  const ProblemSetup p = slider();
  const auto rows = sweep_grid({6.25e-3}, {kT / 200}, p, 1);
  ASSERT_EQ(rows.size(), 1u);
  const RunArtifacts run = simulate(p, 6.25e-3, kT / 200);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_EQ(rows[0].l1, run.norms.l1);
  EXPECT_EQ(rows[0].linf, run.norms.linf);
  EXPECT_EQ(rows[0].steps, run.steps);
  EXPECT_EQ(rows[0].first_rupture, run.first_rupture());
}

TEST(Sweep, FailedRunIsRecordedAndSweepContinues) {
  const auto rows = sweep_grid({6.25e-3, -1.0}, {kT / 50}, slider(), 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_FALSE(rows[1].ok);
  EXPECT_NE(rows[1].error.find("chi"), std::string::npos);
  EXPECT_THROW(sweep_grid({}, {1.0}, slider()), std::invalid_argument);
}

TEST(Sweep, ResultsIndependentOfThreadCount) {
  const std::vector<double> chis{12.5e-3, 6.25e-3}, taus{kT / 50, kT / 100};
  const auto a = sweep_grid(chis, taus, slider(), 1);
  const auto b = sweep_grid(chis, taus, slider(), 3);
  ASSERT_EQ(a.size(), 4u);
  ASSERT_EQ(b.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].chi, chis[i / 2]);
    EXPECT_EQ(a[i].tau, taus[i % 2]);
    EXPECT_EQ(a[i].l1, b[i].l1);
    EXPECT_EQ(a[i].steps, b[i].steps);
  }
}
