#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "entrocode/cli/battery.hpp"
#include "entrocode/cli/commands.hpp"
#include "entrocode/error.hpp"

namespace {

using entrocode::cli::Config;

Config load(const std::string& path, std::optional<std::uint64_t> seed) {
  Config cfg = Config::load(path);
  if (seed) cfg.set("run.seed", std::to_string(*seed));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy estimation and zero-delay state estimation over finite channels"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Overrides run.seed");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };

  auto* entropy = app.add_subcommand("estimate-entropy", "Entropy estimators");
  auto* lyapunov = app.add_subcommand("lyapunov", "Lyapunov spectrum");
  auto* coding = app.add_subcommand("run-coding", "Closed-loop coding run");
  auto* sweep = app.add_subcommand("sweep", "Channel alphabet sweep");
  for (auto* sub : {entropy, lyapunov, coding, sweep}) add_common(sub);

  auto* repro = app.add_subcommand("reproduce-examples", "Acceptance battery");
  bool list = false;
  std::vector<int> only;
  std::string tolerances_path;
  repro->add_flag("--list", list, "List battery items without running them");
  repro->add_option("--only", only, "Run only these item numbers")->delimiter(',');
  repro->add_option("--tolerances", tolerances_path, "Tolerance override file")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (repro->parsed()) {
      if (list) {
        entrocode::cli::list_battery(std::cout);
        return 0;
      }
      entrocode::cli::Tolerances tol;
      if (!tolerances_path.empty()) {
        tol = entrocode::cli::tolerances_from(Config::load(tolerances_path));
      }
      return entrocode::cli::run_battery(std::cout, tol, only) == 0 ? 0 : 1;
    }
    const Config cfg = load(config_path, seed);
    const std::filesystem::path out(out_dir);
    if (entropy->parsed()) return entrocode::cli::cmd_estimate_entropy(cfg, out);
    if (lyapunov->parsed()) return entrocode::cli::cmd_lyapunov(cfg, out);
    if (coding->parsed()) return entrocode::cli::cmd_run_coding(cfg, out);
    if (sweep->parsed()) return entrocode::cli::cmd_sweep(cfg, out);
  } catch (const entrocode::Error& e) {
    std::cerr << "entrocode: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "entrocode: internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
