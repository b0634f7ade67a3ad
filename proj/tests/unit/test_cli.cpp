#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entrocode/cli/battery.hpp"
#include "entrocode/cli/commands.hpp"
#include "entrocode/error.hpp"

using namespace entrocode;
using namespace entrocode::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in, "test");
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("entrocode_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

const char* kIdentityCoding = R"(
[run]
seed = 5
[system]
name = identity
[coding]
scheme = e1
alphabet = 2
eps = 0.05
horizon = 60
ensemble_count = 50
region_kind = grid
region_count = 256
transcripts = 1
)";

TEST_F(CliTest, RunCodingWritesSchemas) {
  ASSERT_EQ(cmd_run_coding(parse(kIdentityCoding), dir_), 0);
  EXPECT_EQ(first_line(dir_ / "coding_summary.csv"),
            "scheme,alphabet,capacity,status,block_length,transient,codebook_size,"
            "fallback_fraction,hierarchy,reason");
  EXPECT_EQ(first_line(dir_ / "criteria.csv"),
            "criterion,eps,p,pass,statistic,t_used,window,passing_fraction");
  EXPECT_EQ(first_line(dir_ / "transcripts" / "transcript_0000.csv"),
            "t,x0,q,xhat0,dist,fallback_flag");
}

TEST_F(CliTest, RerunIsByteIdentical) {
  const Config cfg = parse(kIdentityCoding);
  ASSERT_EQ(cmd_run_coding(cfg, dir_ / "a"), 0);
  ASSERT_EQ(cmd_run_coding(cfg, dir_ / "b"), 0);
  for (const char* f : {"coding_summary.csv", "criteria.csv", "transcripts/transcript_0000.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(CliTest, SeedChangesRandomEnsemble) {
  Config a = parse(kIdentityCoding);
  Config b = a;
  b.set("run.seed", "6");
  ASSERT_EQ(cmd_run_coding(a, dir_ / "a"), 0);
  ASSERT_EQ(cmd_run_coding(b, dir_ / "b"), 0);
  EXPECT_NE(slurp(dir_ / "a" / "transcripts/transcript_0000.csv"),
            slurp(dir_ / "b" / "transcripts/transcript_0000.csv"));
}

TEST_F(CliTest, EntropyOnIdentity) {
  const Config cfg = parse(R"(
[run]
seed = 1
[system]
name = identity
[measure]
kind = lebesgue
count = 2000
[entropy]
methods = separated, partition
eps = 0.125
n_lo = 2
n_hi = 6
partition = grid:4
depth = 6
)");
  ASSERT_EQ(cmd_estimate_entropy(cfg, dir_), 0);
  EXPECT_EQ(first_line(dir_ / "entropy.csv"), "method,eps,n,log2_count");
  const std::string summary = slurp(dir_ / "summary.csv");
  EXPECT_NE(summary.find("method,value,fit_lo,fit_hi,unreliable"), std::string::npos);
}

TEST_F(CliTest, LyapunovCsv) {
  const Config cfg = parse(R"(
[system]
name = cat_map
[lyapunov]
x0 = 0.1234, 0.5678
steps = 1000
)");
  ASSERT_EQ(cmd_lyapunov(cfg, dir_), 0);
  EXPECT_EQ(first_line(dir_ / "lyapunov.csv"), "index,exponent");
}

TEST_F(CliTest, UnknownKeyRejected) {
  Config cfg = parse(kIdentityCoding);
  cfg.set("coding.alphabett", "3");
  try {
    cmd_run_coding(cfg, dir_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST_F(CliTest, UnknownSystemRejected) {
  Config cfg = parse(kIdentityCoding);
  cfg.set("system.name", "baker");
  try {
    cmd_run_coding(cfg, dir_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSystem);
  }
}

TEST_F(CliTest, InfeasibleBuildIsReported) {
  const Config cfg = parse(R"(
[system]
name = cat_map
[coding]
scheme = e1
alphabet = 2
eps = 0.05
horizon = 40
ensemble_count = 4
ensemble_kind = grid
region_kind = grid
region_count = 1024
)");
  ASSERT_EQ(cmd_run_coding(cfg, dir_), 0);
  const std::string s = slurp(dir_ / "coding_summary.csv");
  EXPECT_NE(s.find("infeasible"), std::string::npos);
  EXPECT_NE(s.find("InfeasibleBlockLength"), std::string::npos);
}

TEST(Battery, ListsTenItems) {
  std::ostringstream out;
  list_battery(out);
  const std::string s = out.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 10);
  EXPECT_EQ(battery().size(), 10u);
}

TEST(Battery, TamperedToleranceFails) {
  Tolerances tol;
  tol.cat_lyapunov = -1;
  std::ostringstream out;
  const int only[] = {1};
  EXPECT_EQ(run_battery(out, tol, only), 1);
  EXPECT_EQ(out.str().rfind("FAIL 1", 0), 0u) << out.str();
}

TEST(Battery, ToleranceKeysParse) {
  const Tolerances t = tolerances_from(parse("[tolerance]\npesin = 0.3\nruntime_scale = 2\n"));
  EXPECT_DOUBLE_EQ(t.pesin, 0.3);
  EXPECT_DOUBLE_EQ(t.runtime_scale, 2.0);
  EXPECT_THROW(tolerances_from(parse("[tolerance]\npesim = 0.3\n")), Error);
}

}  // namespace
