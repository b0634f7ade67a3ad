#include <gtest/gtest.h>

#include <cmath>

#include "entrocode/error.hpp"
#include "entrocode/system.hpp"

using namespace entrocode;

namespace {

constexpr double kGrid = 0x1p-52;

TEST(System, CatMapMatchesMatrixModOne) {
  const SystemSpec cat = library_system("cat_map");
  const State y = cat.map(State{0.3, 0.6});
  EXPECT_NEAR(y[0], std::fmod(2 * 0.3 + 0.6, 1.0), 1e-15);
  EXPECT_NEAR(y[1], std::fmod(0.3 + 0.6, 1.0), 1e-15);
  const State back = cat.inverse(y);
  EXPECT_NEAR(back[0], 0.3, 1e-15);
  EXPECT_NEAR(back[1], 0.6, 1e-15);
}

TEST(System, DoublingDoublesUpToLastBit) {
  const SystemSpec d = library_system("doubling");
  EXPECT_NEAR(d.map(State{0.25})[0], 0.5, kGrid);
  EXPECT_NEAR(d.map(State{0.75})[0], 0.5, kGrid);
  EXPECT_NEAR(d.map(State{0.3})[0], 0.6, kGrid);
}

TEST(System, DoublingOrbitDoesNotCollapse) {
  const SystemSpec d = library_system("doubling");
  State x{0.1};
  int zeros = 0;
  for (int t = 0; t < 500; ++t) {
    x = d.map(x);
    zeros += x[0] == 0.0;
  }
  EXPECT_EQ(zeros, 0);
}

TEST(System, ExpandingCircleDegreeThree) {
  const SystemSpec m3 = library_system("expanding_circle", std::vector<double>{3});
  EXPECT_NEAR(m3.map(State{0.2})[0], 0.6, kGrid);
  EXPECT_NEAR(m3.map(State{0.5})[0], 0.5, kGrid);
  EXPECT_DOUBLE_EQ(jacobian(m3, State{0.2})(0, 0), 3.0);
}

TEST(System, HenonJacobianByHand) {
  const SystemSpec h = library_system("henon_like");
  const Matrix j = jacobian(h, State{1.0, 0.0});
  EXPECT_DOUBLE_EQ(j(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(j(0, 1), -0.3);
  EXPECT_DOUBLE_EQ(j(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(j(1, 1), 0.0);
  const State y = h.map(State{1.0, 2.0});
  EXPECT_DOUBLE_EQ(y[0], 5.0 - 0.6 - 1.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);
}

TEST(System, SolenoidJacobianMatchesFiniteDifferences) {
  const SystemSpec s = library_system("solenoid");
  for (const State& x : {State{0.1, 0.2, -0.3}, State{0.77, -0.5, 0.1}}) {
    const Matrix diff = jacobian(s, x) - finite_difference_jacobian(s, x);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(System, SolenoidInverseUndoesMap) {
  const SystemSpec s = library_system("solenoid");
  const State x{0.3, 0.1, -0.2};
  const State back = s.inverse(s.map(x));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
}

TEST(System, NegativePowerNeedsInverse) {
  const SystemSpec d = library_system("doubling");
  try {
    iterate(d, State{0.1}, -1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativePowerOfNoninvertibleMap);
  }
}

TEST(System, UnknownNameRejected) {
  try {
    library_system("lorenz");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSystem);
  }
}

TEST(System, BowenDistanceIsMaxOverOrbit) {
  const SystemSpec d = library_system("doubling");
  const State a{0.1};
  const State b{0.1 + 0x1p-10};
  // Separation doubles each step: 2^-10, ..., 2^-6 at step 4.
  EXPECT_NEAR(bowen_distance(d, a, b, 5), 0x1p-6, 1e-12);
}

TEST(System, LipschitzBoundsOneStepStretch) {
  for (const std::string& name : library_system_names()) {
    const SystemSpec s = library_system(name);
    State a;
    State b;
    if (s.space.dimension() == 1) {
      a = State{0.31};
      b = State{0.3101};
    } else if (s.space.dimension() == 2) {
      a = State{0.31, 0.12};
      b = State{0.3101, 0.1201};
    } else {
      a = State{0.31, 0.1, 0.1};
      b = State{0.3101, 0.1001, 0.1001};
    }
    const double d0 = s.space.distance(a, b);
    const double d1 = s.space.distance(s.map(a), s.map(b));
    EXPECT_LE(d1, s.lipschitz * d0 * (1 + 1e-9) + 1e-15) << name;
  }
}

}  // namespace
