#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "entrocode/coding.hpp"
#include "entrocode/error.hpp"

using namespace entrocode;

namespace {

TEST(Coding, ChannelCapacity) {
  EXPECT_DOUBLE_EQ(Channel::with_alphabet(2).capacity(), 1.0);
  EXPECT_DOUBLE_EQ(Channel::with_alphabet(8).capacity(), 3.0);
  EXPECT_THROW(Channel::with_alphabet(1), Error);
}

TEST(Coding, IndexRoundTrip) {
  for (std::uint64_t v : {0ull, 1ull, 17ull, 242ull}) {
    const auto digits = index_encode(v, 3, 5);
    ASSERT_EQ(digits.size(), 5u);
    EXPECT_EQ(index_decode(digits, 3), v);
  }
  // 17 = 0*81 + 0*27 + 1*9 + 2*3 + 2.
  EXPECT_EQ(index_encode(17, 3, 5), (std::vector<Symbol>{0, 0, 1, 2, 2}));
}

TEST(Coding, IndexOutOfRange) {
  try {
    index_encode(243, 3, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValueOutOfRange);
  }
  const Symbol bad[] = {0, 3};
  EXPECT_THROW(index_decode(bad, 3), Error);
}

TEST(Coding, CheckedPowerSaturates) {
  EXPECT_EQ(checked_power(3, 4), 81u);
  EXPECT_EQ(checked_power(2, 70), std::numeric_limits<std::uint64_t>::max());
}

// Sends the first binary digit of x; the estimator answers the cell centre.
class HalfCoder final : public Coder {
 public:
  Symbol encode(std::span<const State> h) override { return h.back()[0] < 0.5 ? 0 : 1; }
};
class HalfEstimator final : public Estimator {
 public:
  State receive(Symbol q) override { return State{q ? 0.75 : 0.25}; }
};
class WildCoder final : public Coder {
 public:
  Symbol encode(std::span<const State>) override { return 7; }
};

TEST(Coding, RunPoliciesRecordsTranscript) {
  const auto space = StateSpace::circle();
  const std::vector<State> xs = {State{0.1}, State{0.6}, State{0.9}};
  HalfCoder c;
  HalfEstimator e;
  const Transcript tr = run_policies(space, xs, c, e, 2);
  EXPECT_EQ(tr.q, (std::vector<Symbol>{0, 1, 1}));
  EXPECT_NEAR(tr.dist[0], 0.15, 1e-15);
  EXPECT_NEAR(tr.dist[2], 0.15, 1e-15);
}

TEST(Coding, RunPoliciesRejectsForeignSymbols) {
  const std::vector<State> xs = {State{0.1}};
  WildCoder c;
  HalfEstimator e;
  try {
    run_policies(StateSpace::circle(), xs, c, e, 2);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kValueOutOfRange);
  }
}

TEST(Coding, EstimatorStringCount) {
  Transcript a;
  a.xhat = {State{0.25}, State{0.75}};
  Transcript b = a;
  Transcript c;
  c.xhat = {State{0.25}, State{0.25}};
  const std::vector<Transcript> ens = {a, b, c};
  EXPECT_EQ(estimator_string_count(ens, 0), 1u);
  EXPECT_EQ(estimator_string_count(ens, 1), 2u);
  EXPECT_THROW(estimator_string_count(ens, 2), Error);
}

TEST(Coding, PeriodicPolicyWindowsAndWarmup) {
  PeriodicFiniteMemoryPolicy p;
  p.period = 2;
  p.coder_window = 1;
  p.estimator_window = 2;
  p.warmup = 1;
  p.initial_estimate = State{0.5};
  p.coder_map = [](int phase, std::span<const State> w) {
    EXPECT_EQ(w.size(), 1u);
    return static_cast<Symbol>(phase);
  };
  p.estimator_map = [](int phase, std::span<const Symbol> w, bool& fb) {
    fb = phase == 1;
    return State{static_cast<double>(w.size()) / 10};
  };
  const CodingScheme scheme{SchemeKind::kCustom, Channel::with_alphabet(2), 2, 1, 0,
                            [p] { return p.make_coder(); },
                            [p] { return p.make_estimator(); }, p};
  const SystemSpec id = library_system("identity");
  const Transcript tr = run_closed_loop(id, State{0.3}, scheme, 4);
  EXPECT_EQ(tr.q, (std::vector<Symbol>{0, 1, 0, 1}));
  EXPECT_DOUBLE_EQ(tr.xhat[0][0], 0.5);
  EXPECT_DOUBLE_EQ(tr.xhat[1][0], 0.2);
  EXPECT_DOUBLE_EQ(tr.xhat[3][0], 0.2);
  EXPECT_EQ(tr.fallback, (std::vector<bool>{false, true, false, true}));
}

TEST(Coding, TranscriptCsvColumns) {
  const std::vector<State> xs = {State{0.1}};
  HalfCoder c;
  HalfEstimator e;
  const Transcript tr = run_policies(StateSpace::circle(), xs, c, e, 2);
  std::ostringstream out;
  write_transcript_csv(out, tr);
  EXPECT_EQ(out.str(), "t,x0,q,xhat0,dist,fallback_flag\n0,0.10000000000000001,0,0.25,0.14999999999999999,0\n");
}

}  // namespace
