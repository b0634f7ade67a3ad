#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "entrocode/cli/config.hpp"

namespace entrocode::cli {

/// Numeric tolerances of the acceptance battery. Overridable from a config
/// file with keys `tolerance.<field>`.
struct Tolerances {
  double cat_lyapunov = 1e-6;
  double cat_lyapunov_sum = 1e-9;
  double doubling_entropy = 0.1;
  double cat_entropy = 0.2;
  double variational = 0.05;
  double pesin = 0.2;
  double solenoid_entropy = 0.15;
  double solenoid_lyapunov = 0.05;
  double e1_lower_bound_slack = 0.2;
  double solenoid_band_slack = 0.05;
  double henon_jacobian = 1e-4;
  /// Multiplies every runtime limit.
  double runtime_scale = 1.0;
};

Tolerances tolerances_from(const Config& cfg);

struct ItemResult {
  bool pass = false;
  std::string detail;
};

struct BatteryItem {
  int id = 0;
  std::string title;
  double time_limit = 0.0;  // seconds
  std::function<ItemResult(const Tolerances&)> run;
};

const std::vector<BatteryItem>& battery();

/// `--list` output: one line per item.
void list_battery(std::ostream& out);

/// Runs the selected items (all when `only` is empty), printing one
/// PASS/FAIL line each. An item over its time limit fails. Returns the
/// number of failures.
int run_battery(std::ostream& out, const Tolerances& tol, std::span<const int> only = {});

}  // namespace entrocode::cli
