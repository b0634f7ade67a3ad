#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "entrocode/error.hpp"
#include "entrocode/evaluation.hpp"
#include "entrocode/schemes.hpp"

using namespace entrocode;

namespace {

Transcript with_dist(std::vector<double> d) {
  Transcript t;
  t.x.assign(d.size(), State{0.0});
  t.xhat = t.x;
  t.q.assign(d.size(), 0);
  t.fallback.assign(d.size(), false);
  t.dist = std::move(d);
  return t;
}

std::vector<double> ramp(int n, double late) {
  std::vector<double> d(static_cast<std::size_t>(n), 0.01);
  d[2] = 0.9;
  d[static_cast<std::size_t>(n - 1)] = late;
  return d;
}

TEST(Evaluation, E1WorstAfterT) {
  const std::vector<Transcript> ens = {with_dist(ramp(20, 0.02)), with_dist(ramp(20, 0.2))};
  const auto r = eval_e1(ens, 0.1, 5);
  EXPECT_FALSE(r.pass);
  EXPECT_DOUBLE_EQ(r.statistic, 0.2);
  EXPECT_EQ(r.offenders, (std::vector<std::size_t>{1}));
  EXPECT_DOUBLE_EQ(r.passing_fraction, 0.5);
  EXPECT_EQ(r.window, 15);
  EXPECT_TRUE(eval_e1({ens.begin(), 1}, 0.1, 5).pass);
  EXPECT_FALSE(eval_e1({ens.begin(), 1}, 0.1, 2).pass);
}

TEST(Evaluation, E1HorizonTooShort) {
  const std::vector<Transcript> ens = {with_dist(ramp(12, 0.0))};
  try {
    eval_e1(ens, 0.1, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHorizonTooShort);
  }
}

TEST(Evaluation, E2UsesTailWindow) {
  const std::vector<Transcript> ens = {with_dist(ramp(20, 0.05))};
  const auto r = eval_e2(ens, 0.1);
  EXPECT_EQ(r.window, 5);
  EXPECT_EQ(r.t_used, 15);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.statistic, 0.05);
}

TEST(Evaluation, E3EnsembleMeanOfPower) {
  // Two transcripts, final-step distances 0.2 and 0.4: mean square 0.1.
  const std::vector<Transcript> ens = {with_dist({0, 0, 0, 0.2}), with_dist({0, 0, 0, 0.4})};
  const auto r = eval_e3(ens, 0.11, 2.0, 2);
  EXPECT_NEAR(r.statistic, 0.1, 1e-15);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(eval_e3(ens, 0.09, 2.0, 2).pass);
}

TEST(Evaluation, HierarchyWindowsMustAgree) {
  const std::vector<Transcript> ens = {with_dist(ramp(40, 0.01))};
  const auto e1 = eval_e1(ens, 0.1, 5);
  const auto e2 = eval_e2(ens, 0.1, 10);
  const auto e3 = eval_e3(ens, 0.01, 2.0, 10);
  EXPECT_TRUE(hierarchy_check(e1, e2, e3, 40).holds);
  const auto e3_other = eval_e3(ens, 0.01, 2.0, 8);
  try {
    hierarchy_check(e1, e2, e3_other, 40);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWindowMismatch);
  }
}

TEST(Evaluation, HierarchyFlagsViolation) {
  CriterionResult e1{Criterion::kE1, 0.1, 0, true, 0.05, 5, 35, 1.0, {}};
  CriterionResult e2{Criterion::kE2, 0.1, 0, false, 0.2, 30, 10, 0.0, {0}};
  CriterionResult e3{Criterion::kE3, 0.01, 2, true, 0.001, 30, 10, 1.0, {}};
  const auto rep = hierarchy_check(e1, e2, e3, 40);
  EXPECT_FALSE(rep.holds);
  ASSERT_EQ(rep.violations.size(), 1u);
}

TEST(Evaluation, TheoryBand) {
  const double h_cat = std::log2((3 + std::sqrt(5.0)) / 2);
  EXPECT_EQ(theory_band_lo(h_cat), 3);
  EXPECT_EQ(theory_band_hi(h_cat), 3);
  EXPECT_EQ(theory_band_lo(1.0), 2);
  EXPECT_EQ(theory_band_hi(1.0), 3);
  EXPECT_EQ(theory_band_lo(0.0), 2);
  EXPECT_EQ(theory_band_hi(0.0), 2);
}

TEST(Evaluation, IdentitySweepPassesEverywhere) {
  const SystemSpec id = library_system("identity");
  const auto region = sample_initial(id, {MeasureKind::kGrid, 0, 1024, std::nullopt});
  const auto init = sample_initial(id, {MeasureKind::kLebesgue, 0, 100, 1});
  SweepConfig sc;
  sc.eps = 0.05;
  sc.alphabet_lo = 2;
  sc.alphabet_hi = 3;
  sc.horizon = 80;
  const auto r = capacity_sweep(
      id, [&](const Channel& c) { return build_e1_coder(id, region, 0.05, c).scheme; },
      init.points, sc);
  EXPECT_EQ(r.smallest_e1, 2);
  EXPECT_EQ(r.smallest_e2, 2);
  EXPECT_EQ(r.smallest_e3, 2);
  EXPECT_TRUE(r.monotonicity_violations.empty());
  std::ostringstream out;
  write_sweep_csv(out, r);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "alphabet,capacity,criterion,eps,pass,statistic,theory_lo,theory_hi");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Evaluation, SweepMarksInfeasibleRows) {
  const SystemSpec cat = library_system("cat_map");
  const auto region = sample_initial(cat, {MeasureKind::kGrid, 0, 4096, std::nullopt});
  const auto init = sample_initial(cat, {MeasureKind::kLebesgue, 0, 10, 1});
  SweepConfig sc;
  sc.eps = 0.05;
  sc.alphabet_lo = 2;
  sc.alphabet_hi = 2;
  sc.horizon = 40;
  const auto r = capacity_sweep(
      cat, [&](const Channel& c) { return build_e1_coder(cat, region, 0.05, c).scheme; },
      init.points, sc);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.rows[0].infeasible);
  EXPECT_FALSE(r.smallest_e1.has_value());
}

}  // namespace
