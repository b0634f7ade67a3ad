#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entrocode/coding.hpp"

namespace entrocode {

enum class Criterion { kE1, kE2, kE3, kDet };

std::string_view to_string(Criterion criterion);

struct CriterionResult {
  Criterion criterion = Criterion::kE1;
  double eps = 0.0;
  double p = 0.0;  // E3 only
  bool pass = false;
  /// E1/DET/E2: worst error in the window. E3: worst ensemble mean of d^p.
  double statistic = 0.0;
  int t_used = 0;  // first time inside the evaluated window
  int window = 0;  // number of time steps evaluated
  double passing_fraction = 0.0;
  std::vector<std::size_t> offenders;  // failing transcript indices
};

/// Final 25% of the horizon, at least one step.
int default_tail_window(int horizon);

/// Every transcript has dist[t] <= eps for all t in [T, horizon).
CriterionResult eval_e1(std::span<const Transcript> transcripts, double eps, int T);

/// Max of dist over the final tail_window steps <= eps for every transcript.
/// tail_window <= 0 selects default_tail_window.
CriterionResult eval_e2(std::span<const Transcript> transcripts, double eps,
                        int tail_window = 0);

/// Max over the tail window of the ensemble mean of dist^p <= eps.
CriterionResult eval_e3(std::span<const Transcript> transcripts, double eps,
                        double p, int tail_window = 0);

/// The E1 predicate, meant for ensembles started on a grid of the full space.
CriterionResult eval_deterministic(std::span<const Transcript> transcripts,
                                   double eps, int T);

struct HierarchyReport {
  bool holds = true;
  std::vector<std::string> violations;
};

/// Checks pass(E1 at eps, T) => pass(E2 at eps) => pass(E3 at eps^p) for
/// results computed on the same transcripts. Throws WindowMismatch unless
/// the E2 and E3 windows coincide and lie inside [T, horizon).
HierarchyReport hierarchy_check(const CriterionResult& e1,
                                const CriterionResult& e2,
                                const CriterionResult& e3, int horizon);

struct SweepRow {
  int alphabet_size = 0;
  double capacity = 0.0;
  bool infeasible = false;
  std::string reason;
  std::optional<CriterionResult> e1;
  std::optional<CriterionResult> e2;
  std::optional<CriterionResult> e3;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double eps = 0.0;
  double p = 2.0;
  int theory_lo = 0;
  int theory_hi = 0;
  std::optional<int> smallest_e1;
  std::optional<int> smallest_e2;
  std::optional<int> smallest_e3;
  /// Alphabets that failed a criterion passed at a smaller alphabet.
  std::vector<std::string> monotonicity_violations;
};

/// Smallest alphabet with log2 |M| >= h.
int theory_band_lo(double h_lower);
/// 1 + floor(2^h).
int theory_band_hi(double h_upper);

struct SweepConfig {
  double eps = 0.0;
  double p = 2.0;
  int alphabet_lo = 2;
  int alphabet_hi = 4;
  int horizon = 200;
  double h_lower = 0.0;
  double h_upper = 0.0;
};

using SchemeFactory = std::function<CodingScheme(const Channel&)>;

/// Builds the scheme for every alphabet (a thrown Error marks the row
/// infeasible), runs the ensemble and evaluates E1 at T = scheme transient,
/// E2 at eps and E3 at eps^p on the default tail window.
SweepResult capacity_sweep(const SystemSpec& system, const SchemeFactory& factory,
                           std::span<const State> initial_states,
                           const SweepConfig& config);

/// Columns: alphabet, capacity, criterion, eps, pass, statistic, theory_lo,
/// theory_hi.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Columns: criterion, eps, p, pass, statistic, t_used, window,
/// passing_fraction.
void write_criteria_csv(std::ostream& out, std::span<const CriterionResult> results);

}  // namespace entrocode
