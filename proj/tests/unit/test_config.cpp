#include <gtest/gtest.h>

#include <sstream>

#include "entrocode/cli/commands.hpp"
#include "entrocode/cli/config.hpp"
#include "entrocode/error.hpp"

using entrocode::Error;
using entrocode::ErrorCode;
using entrocode::cli::Config;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in, "test");
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

TEST(Config, SectionsPrefixKeys) {
  const Config c = parse("# top\nrun.seed = 4\n[system]\nname = cat_map  # tail\n\n[coding]\neps=0.05\n");
  EXPECT_EQ(c.uint("run.seed"), 4u);
  EXPECT_EQ(c.str("system.name"), "cat_map");
  EXPECT_DOUBLE_EQ(c.real("coding.eps"), 0.05);
  EXPECT_EQ(c.entries().size(), 3u);
}

TEST(Config, Lists) {
  const Config c = parse("[entropy]\neps = 0.1, 0.05 ,0.025\nmethods = separated,katok\n");
  EXPECT_EQ(c.reals("entropy.eps"), (std::vector<double>{0.1, 0.05, 0.025}));
  EXPECT_EQ(c.list("entropy.methods"), (std::vector<std::string>{"separated", "katok"}));
  EXPECT_EQ(c.reals("missing", {1.0}), (std::vector<double>{1.0}));
}

TEST(Config, Errors) {
  EXPECT_EQ(code_of([] { parse("a = 1\na = 2\n"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([] { parse("no equals sign\n"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([] { parse("[broken\n"); }), ErrorCode::kConfig);
  const Config c = parse("x = 1.5\ny = abc\nflag = maybe\n");
  EXPECT_EQ(code_of([&] { c.integer("x"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { c.real("y"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { c.str("z"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { c.flag("flag", false); }), ErrorCode::kConfig);
}

TEST(Config, RejectUnknown) {
  const Config c = parse("[system]\nname = doubling\nnmae = typo\n");
  const std::string_view known[] = {"system.name"};
  EXPECT_EQ(code_of([&] { c.reject_unknown(known); }), ErrorCode::kConfig);
}

TEST(Config, RandomMeasureNeedsSeed) {
  const Config c = parse("[measure]\nkind = lebesgue\n");
  EXPECT_EQ(code_of([&] { entrocode::cli::measure_from(c, "measure.", 1, "lebesgue", 10); }),
            ErrorCode::kSeedRequired);
  const Config g = parse("[measure]\nkind = grid\n");
  EXPECT_FALSE(entrocode::cli::measure_from(g, "measure.", 1, "lebesgue", 16).seed);
}

TEST(Config, DerivedSeedsDifferPerStream) {
  using entrocode::cli::derive_seed;
  EXPECT_NE(derive_seed(1, 1), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 1), derive_seed(2, 1));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Config, PartitionSpecs) {
  const auto cat = entrocode::library_system("cat_map");
  EXPECT_EQ(entrocode::cli::partition_from(cat, "grid:4").size(), 16u);
  EXPECT_EQ(entrocode::cli::partition_from(cat, "grid:2,3").size(), 6u);
  const auto sol = entrocode::library_system("solenoid");
  EXPECT_EQ(entrocode::cli::partition_from(sol, "solenoid:2:1").size(), 8u);
  EXPECT_EQ(code_of([&] { entrocode::cli::partition_from(cat, "grid:x"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { entrocode::cli::partition_from(cat, "voronoi:3"); }),
            ErrorCode::kConfig);
}

}  // namespace
