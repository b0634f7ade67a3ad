#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "entrocode/state.hpp"
#include "entrocode/system.hpp"

namespace entrocode {

class Partition;

enum class MeasureKind { kLebesgue, kGrid, kSrbBurnin };

std::string_view to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(std::string_view name);

struct MeasureSpec {
  MeasureKind kind = MeasureKind::kLebesgue;
  int burnin = 0;
  int sample_count = 1;
  std::optional<std::uint64_t> seed;
};

/// Finite empirical surrogate of the initial-state measure.
struct SampleSet {
  std::vector<State> points;
  std::vector<double> weights;
  std::string system_name;
  MeasureSpec provenance;
  /// Radius within which every point of the sampled region has a sample,
  /// when known (lattices). Zero when unknown.
  double covering_radius = 0.0;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Uniform [0,1) double from the top 53 bits of a 64-bit engine draw.
double unit_uniform(std::uint64_t bits) noexcept;

SampleSet sample_initial(const SystemSpec& system, const MeasureSpec& spec);

/// Samples (with renormalised weights) at the selected indices.
SampleSet subset(const SampleSet& samples, const std::vector<std::size_t>& idx);

SampleSet point_mass(const SystemSpec& system, const State& x);

/// Keeps samples whose forward orbit stays in the domain for `steps` steps.
SampleSet trapped_samples(const SystemSpec& system, const SampleSet& samples,
                          int steps);

/// Total-variation gap between the cell histogram of the samples and of
/// their images under one application of the map.
double invariance_gap(const SystemSpec& system, const SampleSet& samples,
                      const Partition& partition);

/// Occupied cells of an axis-aligned grid with side <= resolution.
struct CellCover {
  std::vector<int> cells_per_axis;
  std::set<std::uint64_t> cells;

  std::uint64_t total_cells() const;
  std::size_t size() const { return cells.size(); }
};

CellCover support_cover(const StateSpace& space, const SampleSet& samples,
                        double resolution);

std::uint64_t grid_cell_id(const StateSpace& space,
                           const std::vector<int>& cells_per_axis,
                           const State& x);

/// Centroid of the samples. Periodic axes use the circular mean.
State centroid(const StateSpace& space, const SampleSet& samples);

void write_samples_csv(std::ostream& out, const SampleSet& samples);
SampleSet read_samples_csv(std::istream& in, std::size_t dimension);

}  // namespace entrocode
