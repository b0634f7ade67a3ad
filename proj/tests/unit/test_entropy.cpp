#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "entrocode/entropy.hpp"
#include "entrocode/error.hpp"

using namespace entrocode;

namespace {

SampleSet lattice(const SystemSpec& s, int n) {
  return sample_initial(s, {MeasureKind::kGrid, 0, n, std::nullopt});
}

TEST(Entropy, LeastSquaresSlope) {
  const double xs[] = {1, 2, 3, 4};
  const double ys[] = {3, 5, 7, 9};
  EXPECT_DOUBLE_EQ(least_squares_slope(xs, ys), 2.0);
}

TEST(Entropy, GreedyCoverIsSeparatedAndSpanning) {
  const SystemSpec cat = library_system("cat_map");
  const auto s = sample_initial(cat, {MeasureKind::kLebesgue, 0, 1500, 3});
  for (int n : {1, 3}) {
    const auto sep = greedy_separated(cat, s, n, 0.1);
    const auto span = greedy_spanning(cat, s, n, 0.1);
    EXPECT_TRUE(verify_separated(cat, sep, n, 0.1));
    EXPECT_TRUE(verify_spanning(cat, s, span, n, 0.1));
  }
}

TEST(Entropy, SeparatedCountsOnDyadicLatticeByHand) {
  // Lattice points (i + 1/2) / 64 under doubling. At n = 1 and eps just
  // under 1/8, the greedy scan keeps every eighth point: 8 centres.
  const SystemSpec d = library_system("doubling");
  const auto s = lattice(d, 64);
  EXPECT_EQ(greedy_separated(d, s, 1, 0.124).size(), 8u);
  // One more step doubles all distances, so twice as many centres.
  EXPECT_EQ(greedy_separated(d, s, 2, 0.124).size(), 16u);
}

TEST(Entropy, IdentityHasZeroEntropy) {
  const SystemSpec id = library_system("identity");
  const auto s = sample_initial(id, {MeasureKind::kLebesgue, 0, 1000, 2});
  const double eps[] = {0.05};
  const auto top = estimate_topological_entropy(id, s, eps, 1, 6);
  EXPECT_NEAR(top.value, 0.0, 0.02);
  const auto part = partition_entropy(id, s, grid_partition(id.space, 8), 6);
  EXPECT_NEAR(part.estimate.value, 0.0, 0.02);
}

TEST(Entropy, BracketSeparatedBelowHalfSpanning) {
  const SystemSpec d = library_system("doubling");
  const auto s = sample_initial(d, {MeasureKind::kLebesgue, 0, 2000, 4});
  const double eps[] = {0.125, 0.0625};
  const auto top = estimate_topological_entropy(d, s, eps, 1, 6);
  ASSERT_EQ(top.bracket.size(), 12u);
  for (const BracketRow& row : top.bracket) EXPECT_LE(row.separated, row.spanning_half);
}

TEST(Entropy, SaturationOption) {
  const std::vector<std::pair<int, std::size_t>> counts = {
      {1, 2}, {2, 4}, {3, 8}, {4, 16}, {5, 30}, {6, 50}};
  const auto loose = fit_counts(EntropyMethod::kSeparated, 0.1, counts, 100, 1.0);
  EXPECT_EQ(loose.fit_window, std::make_pair(4, 6));
  const auto tight = fit_counts(EntropyMethod::kSeparated, 0.1, counts, 100, 0.2);
  EXPECT_EQ(tight.fit_window, std::make_pair(2, 4));
  EXPECT_NEAR(tight.value, 1.0, 1e-12);
  EXPECT_TRUE(tight.unreliable);
  EXPECT_THROW(fit_counts(EntropyMethod::kSeparated, 0.1, counts, 100, 0.0), Error);
}

TEST(Entropy, DoublingBinaryBlockEntropyIsExactlyN) {
  const SystemSpec d = library_system("doubling");
  const auto pe = partition_entropy(d, lattice(d, 1 << 14), grid_partition(d.space, 2), 8);
  for (const auto& [n, h] : pe.estimate.per_n) EXPECT_NEAR(h, n, 1e-9);
  EXPECT_NEAR(pe.estimate.value, 1.0, 1e-9);
}

TEST(Entropy, CylinderGuardLimitsDepth) {
  const SystemSpec d = library_system("doubling");
  // 2^10 samples, guard N/10 ~ 102 cylinders: 2^6 = 64 passes, 2^7 does not.
  const auto pe = partition_entropy(d, lattice(d, 1 << 10), grid_partition(d.space, 2), 10);
  EXPECT_EQ(pe.reliable_depth, 6);
  EXPECT_TRUE(pe.under_sampled);
}

TEST(Entropy, TypicalSetCardinalityBound) {
  const SystemSpec d = library_system("doubling");
  const auto s = lattice(d, 1 << 14);
  const Partition p = grid_partition(d.space, 4);
  const TypicalSet t = typical_set(d, s, p, 6, 0.2, 1.0);
  // Every length-6 itinerary over 4 cells is fixed by 7 bits: 128 strings of
  // mass 2^-7, inside [2^-7.2, 2^-4.8].
  EXPECT_EQ(t.size(), 128u);
  EXPECT_LE(static_cast<double>(t.size()), t.cardinality_bound());
  EXPECT_NEAR(t.covered_mass(), 1.0, 1e-12);
  EXPECT_TRUE(t.index_of(t.at(5).symbols).has_value());
  EXPECT_EQ(*t.index_of(t.at(5).symbols), 5u);
}

TEST(Entropy, EmptyTypicalSetThrows) {
  const SystemSpec d = library_system("doubling");
  const auto s = lattice(d, 1 << 12);
  try {
    typical_set(d, s, grid_partition(d.space, 2), 6, 0.1, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTypicalSet);
  }
}

TEST(Entropy, SmbDeviationZeroOnEqualCylinders) {
  const SystemSpec d = library_system("doubling");
  const int depths[] = {2, 4, 8};
  const auto smb = smb_deviation(d, lattice(d, 1 << 12), grid_partition(d.space, 2), depths, 0.01);
  for (bool z : smb.exact_zero) EXPECT_TRUE(z);
  EXPECT_FALSE(smb.rate.has_value());
}

TEST(Entropy, KatokOnDoubling) {
  const SystemSpec d = library_system("doubling");
  const auto s = sample_initial(d, {MeasureKind::kLebesgue, 0, 3000, 8});
  const auto k = katok_entropy(d, s, 1, 7, 1.0 / 32, 0.1);
  EXPECT_NEAR(k.value, 1.0, 0.15);
}

TEST(Entropy, CsvHasSummaryRow) {
  EntropyEstimate e;
  e.method = EntropyMethod::kPartition;
  e.epsilon = 0.5;
  e.value = 1.25;
  e.per_n = {{1, 1.0}, {2, 2.25}};
  std::ostringstream out;
  write_entropy_csv(out, std::span(&e, 1));
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,eps,n,log2_count");
  EXPECT_NE(csv.find("partition,0.5,summary,1.25"), std::string::npos);
}

}  // namespace
