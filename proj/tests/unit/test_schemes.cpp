#include <gtest/gtest.h>

#include <cmath>

#include "entrocode/error.hpp"
#include "entrocode/evaluation.hpp"
#include "entrocode/schemes.hpp"

using namespace entrocode;

namespace {

SampleSet lattice(const SystemSpec& s, int n) {
  return sample_initial(s, {MeasureKind::kGrid, 0, n, std::nullopt});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kBadParams;
}

TEST(Schemes, E1BlockLengthFitsCodebook) {
  const SystemSpec d = library_system("doubling");
  const auto e1 = build_e1_coder(d, lattice(d, 4096), 1.0 / 16, Channel::with_alphabet(3));
  EXPECT_LE(static_cast<double>(e1.codebook.size()), std::pow(3.0, e1.k));
  EXPECT_GT(static_cast<double>(e1.codebook.size()), std::pow(3.0, e1.k - 1));
  EXPECT_LT(e1.eps_cover, 1.0 / 16);
  const auto init = sample_initial(d, {MeasureKind::kLebesgue, 0, 300, 1});
  const auto ens = run_ensemble(d, init.points, e1.scheme, 60);
  EXPECT_TRUE(eval_e1(ens, 1.0 / 16, e1.k).pass);
}

TEST(Schemes, E1InfeasibleBelowEntropy) {
  const SystemSpec cat = library_system("cat_map");
  EXPECT_EQ(code_of([&] {
              build_e1_coder(cat, lattice(cat, 4096), 0.05, Channel::with_alphabet(2));
            }),
            ErrorCode::kInfeasibleBlockLength);
}

TEST(Schemes, E2BlockStarts) {
  E2Options o;
  o.first_block = 0;
  o.j_max = 2;
  // Lengths 1, 2, 3, 3, ...
  EXPECT_EQ(e2_block_starts(o, 12), (std::vector<int>{0, 1, 3, 6, 9}));
  o.first_block = 2;
  EXPECT_EQ(e2_block_starts(o, 8), (std::vector<int>{0, 3, 6}));
}

TEST(Schemes, E2RejectsCoarsePartition) {
  const SystemSpec d = library_system("doubling");
  const auto s = lattice(d, 1 << 12);
  const Partition p = grid_partition(d.space, 2);
  E2Options o;
  o.j_max = 3;
  const auto sets = typical_set_family(d, s, p, 1, 4, 0.2, 1.0);
  // diam 1/2 >= eps / L = 0.3 / 2.
  EXPECT_EQ(code_of([&] {
              build_e2_coder(d, p, sets, Channel::with_alphabet(3), 0.3, State{0.5}, o);
            }),
            ErrorCode::kPartitionTooCoarse);
}

TEST(Schemes, E3Preconditions) {
  const SystemSpec d = library_system("doubling");
  const auto s = lattice(d, 1 << 14);
  const Partition fine = grid_partition(d.space, 8);
  const TypicalSet t = typical_set(d, s, fine, 8, 0.3, 1.0);
  ASSERT_EQ(t.size(), 1024u);
  // 1024 strings plus the fallback word exceed 2^8.
  EXPECT_EQ(code_of([&] {
              build_e3_coder(d, fine, 8, t, Channel::with_alphabet(2), 2, 0.1, State{0.5});
            }),
            ErrorCode::kTypicalSetOverflow);
  const Partition coarse = grid_partition(d.space, 2);
  const TypicalSet tc = typical_set(d, s, coarse, 8, 0.3, 1.0);
  EXPECT_EQ(code_of([&] {
              build_e3_coder(d, coarse, 8, tc, Channel::with_alphabet(3), 2, 0.1, State{0.5});
            }),
            ErrorCode::kPartitionTooCoarse);
  // 1 - eps / (2 diam^p) on the circle of diameter 1/2.
  EXPECT_NEAR(e3_mass_threshold(d.space, 2, 0.1), 1 - 0.1 / (2 * 0.25), 1e-15);
}

TEST(Schemes, E3IsPeriodicFiniteMemory) {
  const SystemSpec d = library_system("doubling");
  const auto s = lattice(d, 1 << 14);
  const Partition p = grid_partition(d.space, 8);
  const CodingScheme e3 = build_e3_coder(d, p, 8, typical_set(d, s, p, 8, 0.3, 1.0),
                                         Channel::with_alphabet(3), 2, 0.1, State{0.5});
  ASSERT_TRUE(e3.periodic.has_value());
  EXPECT_EQ(e3.periodic->period, 8);
  EXPECT_EQ(e3.periodic->coder_window, 1);
}

TEST(Schemes, ZoomTransientAndShrinkage) {
  const SystemSpec cat = library_system("cat_map");
  const double lam = (3 + std::sqrt(5.0)) / 2;
  const CodingScheme two = build_zoom_coder(cat, Channel::with_alphabet(2), 0.05, 500);
  EXPECT_EQ(two.transient, 500);  // 2 < lambda_u: the box never shrinks
  const CodingScheme three = build_zoom_coder(cat, Channel::with_alphabet(3), 0.05, 500);
  EXPECT_LT(three.transient, 100);
  // The unstable width contracts by lambda / 3 per step after the first cut.
  const auto init = sample_initial(cat, {MeasureKind::kLebesgue, 0, 100, 3});
  const auto ens = run_ensemble(cat, init.points, three, 300);
  const auto r = eval_e1(ens, 0.05, three.transient);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(lam / 3, 1.0);
}

TEST(Schemes, ZoomRejectsNonLinearMaps) {
  const SystemSpec h = library_system("henon_like");
  EXPECT_EQ(code_of([&] { build_zoom_coder(h, Channel::with_alphabet(3), 0.05); }),
            ErrorCode::kBadParams);
}

}  // namespace
