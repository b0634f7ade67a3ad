#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "entrocode/measure.hpp"
#include "entrocode/partition.hpp"
#include "entrocode/system.hpp"

namespace entrocode {

enum class EntropyMethod {
  kSpanning,
  kSeparated,
  kKatok,
  kPartition,
  kRea,
  kRestricted
};

std::string_view to_string(EntropyMethod method);

/// Counts at or above this fraction of the sample size are treated as
/// saturated and kept out of slope fits.
inline constexpr double kSaturationFraction = 0.2;

/// Cylinder statistics need distinct cylinders <= sample_count / 10.
inline constexpr double kCylinderGuard = 0.1;

struct BracketRow {
  double eps = 0.0;
  int n = 0;
  std::size_t separated = 0;      // greedy (n, eps)-separated set
  std::size_t spanning_half = 0;  // verified greedy (n, eps/2)-spanning set
};

struct EntropyEstimate {
  EntropyMethod method = EntropyMethod::kSeparated;
  double value = 0.0;  // bits per step
  double epsilon = 0.0;
  /// (n, log2 count) for counting methods; (n, H(P^n)) for kPartition.
  std::vector<std::pair<int, double>> per_n;
  std::pair<int, int> fit_window{0, 0};
  /// Set when saturation or under-sampling removed depths from the fit or
  /// fewer than three depths remained.
  bool unreliable = false;
  std::vector<BracketRow> bracket;
};

/// Rows (method, eps, n, log2_count) per estimate, then a summary row with
/// n = "summary" and the fitted value.
void write_entropy_csv(std::ostream& out, std::span<const EntropyEstimate> estimates);

/// Least-squares slope of ys against xs.
double least_squares_slope(std::span<const double> xs,
                           std::span<const double> ys);

/// Orbits of a sample set, stored time-major per sample.
class OrbitTable {
 public:
  OrbitTable(const SystemSpec& system, const SampleSet& samples, int length);

  std::size_t samples() const noexcept { return count_; }
  int length() const noexcept { return length_; }
  const State& at(std::size_t sample, int time) const noexcept {
    return states_[sample * static_cast<std::size_t>(length_) +
                   static_cast<std::size_t>(time)];
  }
  /// Whether the Bowen-n distance between two samples is <= eps.
  bool within(const StateSpace& space, std::size_t a, std::size_t b, int n,
              double eps) const noexcept;

 private:
  std::size_t count_;
  int length_;
  std::vector<State> states_;
};

/// Sample indices of a greedy deterministic-order cover: a sample is kept iff
/// no kept sample lies within Bowen-n distance eps. The result is both
/// (n, eps)-spanning for the samples and (n, eps)-separated.
std::vector<std::size_t> greedy_cover_indices(const SystemSpec& system,
                                              const OrbitTable& orbits,
                                              const StateSpace& space, int n,
                                              double eps);

std::vector<State> greedy_spanning(const SystemSpec& system,
                                   const SampleSet& region, int n, double eps);

std::vector<State> greedy_separated(const SystemSpec& system,
                                    const SampleSet& region, int n, double eps);

/// True iff every sample lies within Bowen-n distance eps of some center.
bool verify_spanning(const SystemSpec& system, const SampleSet& region,
                     std::span<const State> centers, int n, double eps);

/// True iff all pairwise Bowen-n distances exceed eps.
bool verify_separated(const SystemSpec& system, std::span<const State> points,
                      int n, double eps);

/// Greedy counts -> slope over the reliable depths.
EntropyEstimate fit_counts(EntropyMethod method, double eps,
                           const std::vector<std::pair<int, std::size_t>>& counts,
                           std::size_t sample_count,
                           double saturation = kSaturationFraction);

struct TopologicalOptions {
  double saturation = kSaturationFraction;
  /// Also compute the spanning(eps/2) column of the bracket.
  bool bracket = true;
};

/// Separated-set slope at the smallest eps, with the (separated at eps,
/// spanning at eps/2) bracket for every eps and n.
EntropyEstimate estimate_topological_entropy(const SystemSpec& system,
                                             const SampleSet& region,
                                             std::span<const double> eps_list,
                                             int n_lo, int n_hi,
                                             const TopologicalOptions& options = {});

/// Number of Bowen (n, eps)-balls picked by max-gain greedy until sample mass
/// >= 1 - delta is covered.
std::size_t katok_spanning(const SystemSpec& system, const SampleSet& samples,
                           int n, double eps, double delta);

EntropyEstimate katok_entropy(const SystemSpec& system,
                              const SampleSet& samples, int n_lo, int n_hi,
                              double eps, double delta);

/// Like katok_spanning, covering with density balls B(x, n, eps, r): points
/// within eps at more than (1 - r) n of the times 0..n-1.
std::size_t rea_spanning(const SystemSpec& system, const SampleSet& samples,
                         int n, double eps, double r, double delta);

EntropyEstimate rea_entropy(const SystemSpec& system, const SampleSet& samples,
                            int n_lo, int n_hi, double eps, double r,
                            double delta);

/// Separated-count slope on a subset of a parent sample set.
struct RestrictedEntropy {
  EntropyEstimate estimate;
  double mass_fraction = 0.0;
};

RestrictedEntropy restricted_entropy(const SystemSpec& system,
                                     const SampleSet& parent,
                                     const std::vector<std::size_t>& subset_idx,
                                     int n_lo, int n_hi, double scale);

struct PartitionEntropy {
  EntropyEstimate estimate;            // per_n = (n, H(P^n)); value = limit
  std::vector<double> rate;            // H(P^n) / n, n = 1..n_max
  std::vector<double> increments;      // H(P^{n+1}) - H(P^n)
  std::vector<std::size_t> cylinders;  // distinct observed cylinders per n
  int reliable_depth = 0;              // largest n passing the cylinder guard
  bool under_sampled = false;
};

PartitionEntropy partition_entropy(const SystemSpec& system,
                                   const SampleSet& samples,
                                   const Partition& partition, int n_max);

/// Empirical cylinder statistics at several depths from one pass.
class CylinderTable {
 public:
  CylinderTable(const SystemSpec& system, const SampleSet& samples,
                const Partition& partition, int depth);

  int depth() const noexcept { return depth_; }
  std::size_t samples() const noexcept { return order_.size(); }
  std::span<const Symbol> string(std::size_t sample) const noexcept {
    return {symbols_.data() + sample * static_cast<std::size_t>(depth_),
            static_cast<std::size_t>(depth_)};
  }
  /// Sample indices in lexicographic itinerary order.
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Calls visit(first, last) for each run of order() sharing an n-prefix.
  template <class Visit>
  void for_each_cylinder(int n, Visit&& visit) const {
    std::size_t start = 0;
    for (std::size_t i = 1; i <= order_.size(); ++i) {
      if (i == order_.size() || !same_prefix(order_[start], order_[i], n)) {
        visit(start, i);
        start = i;
      }
    }
  }

 private:
  bool same_prefix(std::size_t a, std::size_t b, int n) const noexcept;

  int depth_;
  std::vector<Symbol> symbols_;
  std::vector<std::size_t> order_;
  std::vector<double> weights_;
};

class TypicalSet {
 public:
  TypicalSet() = default;
  TypicalSet(int depth, double delta, double entropy_ref,
             std::vector<ItineraryString> strings, double covered_mass);

  int depth() const noexcept { return depth_; }
  double delta() const noexcept { return delta_; }
  double entropy_ref() const noexcept { return entropy_ref_; }
  double covered_mass() const noexcept { return covered_mass_; }
  std::size_t size() const noexcept { return strings_.size(); }
  bool empty() const noexcept { return strings_.empty(); }
  const std::vector<ItineraryString>& strings() const noexcept {
    return strings_;
  }
  const ItineraryString& at(std::size_t index) const { return strings_.at(index); }

  /// Rank of the string in lexicographic order, if typical.
  std::optional<std::size_t> index_of(std::span<const Symbol> s) const;

  /// 2^{n (h + delta)}.
  double cardinality_bound() const;

 private:
  int depth_ = 0;
  double delta_ = 0.0;
  double entropy_ref_ = 0.0;
  std::vector<ItineraryString> strings_;
  double covered_mass_ = 0.0;
};

/// Strings of length n whose empirical mass lies in
/// [2^{-n(h+delta)}, 2^{-n(h-delta)}]. May be empty.
TypicalSet typical_set_from(const CylinderTable& table, int n, double delta,
                            double entropy_ref);

/// Throws EmptyTypicalSet when no string qualifies. h comes from
/// partition_entropy on the same inputs.
TypicalSet typical_set(const SystemSpec& system, const SampleSet& samples,
                       const Partition& partition, int n, double delta);

TypicalSet typical_set(const SystemSpec& system, const SampleSet& samples,
                       const Partition& partition, int n, double delta,
                       double entropy_ref);

struct SmbDeviation {
  std::vector<std::pair<int, double>> mass;  // (n, deviation-set mass)
  std::vector<bool> exact_zero;
  std::optional<double> rate;  // slope of log2 mass vs n over nonzero masses
  double entropy_ref = 0.0;
};

SmbDeviation smb_deviation(const SystemSpec& system, const SampleSet& samples,
                           const Partition& partition,
                           std::span<const int> n_list, double delta);

SmbDeviation smb_deviation(const SystemSpec& system, const SampleSet& samples,
                           const Partition& partition,
                           std::span<const int> n_list, double delta,
                           double entropy_ref);

}  // namespace entrocode
