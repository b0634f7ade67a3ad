#include <gtest/gtest.h>

#include <cmath>

#include "entrocode/error.hpp"
#include "entrocode/lyapunov.hpp"
#include "entrocode/measure.hpp"
#include "entrocode/partition.hpp"

using namespace entrocode;

namespace {

TEST(Measure, SeedRequiredForRandomKinds) {
  const SystemSpec d = library_system("doubling");
  try {
    sample_initial(d, {MeasureKind::kLebesgue, 0, 10, std::nullopt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSeedRequired);
  }
}

TEST(Measure, SameSeedSameSamples) {
  const SystemSpec cat = library_system("cat_map");
  const auto a = sample_initial(cat, {MeasureKind::kLebesgue, 0, 100, 9});
  const auto b = sample_initial(cat, {MeasureKind::kLebesgue, 0, 100, 9});
  const auto c = sample_initial(cat, {MeasureKind::kLebesgue, 0, 100, 10});
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, c.points);
}

TEST(Measure, GridIsCellMidpoints) {
  const SystemSpec cat = library_system("cat_map");
  const auto g = sample_initial(cat, {MeasureKind::kGrid, 0, 16, std::nullopt});
  ASSERT_EQ(g.size(), 16u);
  EXPECT_DOUBLE_EQ(g.points[0][0], 0.125);
  EXPECT_DOUBLE_EQ(g.points[0][1], 0.125);
  // Half the cell diagonal.
  EXPECT_NEAR(g.covering_radius, std::sqrt(2.0) * 0.25 / 2, 1e-15);
  double total = 0;
  for (double w : g.weights) total += w;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(Measure, SolenoidBurninLandsNearAttractor) {
  const SystemSpec s = library_system("solenoid");
  const auto pts = sample_initial(s, {MeasureKind::kSrbBurnin, 200, 500, 3});
  // The attractor lies in the annulus 1/2 - 1/6 <= r <= 1/2 + 1/6.
  double theta_mean = 0;
  for (const State& p : pts.points) {
    const double r = std::hypot(p[1], p[2]);
    EXPECT_GE(r, 1.0 / 3 - 1e-9);
    EXPECT_LE(r, 2.0 / 3 + 1e-9);
    theta_mean += p[0];
  }
  // Theta stays spread over the circle rather than collapsing to a point.
  EXPECT_NEAR(theta_mean / pts.size(), 0.5, 0.05);
}

TEST(Measure, SubsetRenormalises) {
  const SystemSpec d = library_system("doubling");
  const auto g = sample_initial(d, {MeasureKind::kGrid, 0, 8, std::nullopt});
  const auto s = subset(g, {1, 3});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.weights[0], 0.5);
  EXPECT_EQ(s.points[1], g.points[3]);
}

TEST(Measure, CentroidUsesCircularMean) {
  const SystemSpec d = library_system("doubling");
  SampleSet s;
  s.points = {State{0.95}, State{0.05}};
  s.weights = {0.5, 0.5};
  const State c = centroid(d.space, s);
  EXPECT_LT(circle_distance(c[0], 0.0), 1e-12);
}

TEST(Measure, LebesgueIsNearlyInvariantUnderCat) {
  const SystemSpec cat = library_system("cat_map");
  const auto s = sample_initial(cat, {MeasureKind::kLebesgue, 0, 200000, 5});
  EXPECT_LT(invariance_gap(cat, s, grid_partition(cat.space, 4)), 0.02);
}

TEST(Lyapunov, DoublingIsOneBit) {
  const SystemSpec d = library_system("doubling");
  const auto ly = lyapunov_spectrum(d, State{0.123}, 1000);
  ASSERT_EQ(ly.size(), 1u);
  EXPECT_DOUBLE_EQ(ly[0], 1.0);
}

TEST(Lyapunov, CatMapGoldenRatioSquared) {
  const SystemSpec cat = library_system("cat_map");
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const auto ly = lyapunov_spectrum(cat, State{0.2, 0.7}, 2000);
  EXPECT_NEAR(ly[0], 2 * std::log2(phi), 1e-9);
  EXPECT_NEAR(ly[1], -2 * std::log2(phi), 1e-9);
}

TEST(Lyapunov, PesinMargulisReport) {
  const auto rep = pesin_margulis_check(1.3, {1.3885, -1.3885}, 0.2);
  EXPECT_TRUE(rep.inequality_holds);
  EXPECT_TRUE(rep.equality);
  EXPECT_DOUBLE_EQ(rep.positive_sum, 1.3885);
  const auto over = pesin_margulis_check(2.0, {1.0, -2.0}, 0.1);
  EXPECT_FALSE(over.inequality_holds);
  EXPECT_FALSE(over.equality);
}

}  // namespace
