#include "entrocode/measure.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "entrocode/error.hpp"
#include "entrocode/partition.hpp"

namespace entrocode {
namespace {

State uniform_point(const StateSpace& space, std::mt19937_64& rng) {
  const std::size_t d = space.dimension();
  for (;;) {
    std::array<double, State::kMaxDim> c{};
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = space.axis_lo(i) + space.axis_extent(i) * unit_uniform(rng());
    }
    State x(std::span<const double>(c.data(), d));
    if (space.contains(x)) return x;
  }
}

std::vector<State> lattice(const StateSpace& space, int count,
                           double& covering_radius) {
  const std::size_t d = space.dimension();
  const int m = static_cast<int>(std::lround(std::pow(count, 1.0 / d)));
  long long total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= m;
  if (m < 1 || total != count) {
    throw Error(ErrorCode::kBadParams,
                "grid sample_count must be a perfect power of the dimension");
  }
  std::array<double, State::kMaxDim> side{};
  for (std::size_t i = 0; i < d; ++i) side[i] = space.axis_extent(i) / m;
  covering_radius = space.box_diameter({side.data(), d}) / 2.0;

  std::vector<State> pts;
  pts.reserve(static_cast<std::size_t>(count));
  std::array<int, State::kMaxDim> idx{};
  for (long long k = 0; k < total; ++k) {
    long long r = k;
    for (std::size_t i = d; i-- > 0;) {
      idx[i] = static_cast<int>(r % m);
      r /= m;
    }
    std::array<double, State::kMaxDim> c{};
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = space.axis_lo(i) + (idx[i] + 0.5) * side[i];
    }
    State x(std::span<const double>(c.data(), d));
    if (space.contains(x)) pts.push_back(x);
  }
  return pts;
}

}  // namespace

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kLebesgue:
      return "lebesgue";
    case MeasureKind::kGrid:
      return "grid";
    case MeasureKind::kSrbBurnin:
      return "srb_burnin";
  }
  return "unknown";
}

MeasureKind measure_kind_from_string(std::string_view name) {
  if (name == "lebesgue") return MeasureKind::kLebesgue;
  if (name == "grid") return MeasureKind::kGrid;
  if (name == "srb_burnin") return MeasureKind::kSrbBurnin;
  throw Error(ErrorCode::kConfig, "unknown measure kind " + std::string(name));
}

double unit_uniform(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

SampleSet sample_initial(const SystemSpec& system, const MeasureSpec& spec) {
  if (spec.sample_count < 1) {
    throw Error(ErrorCode::kBadParams, "sample_count must be >= 1");
  }
  if (spec.kind == MeasureKind::kSrbBurnin && spec.burnin < 0) {
    throw Error(ErrorCode::kBadParams, "burnin must be >= 0");
  }
  SampleSet out;
  out.system_name = system.name;
  out.provenance = spec;
  if (spec.kind == MeasureKind::kGrid) {
    out.points = lattice(system.space, spec.sample_count, out.covering_radius);
  } else {
    if (!spec.seed) {
      throw Error(ErrorCode::kSeedRequired,
                  std::string(to_string(spec.kind)) + " sampling");
    }
    std::mt19937_64 rng(*spec.seed);
    out.points.reserve(static_cast<std::size_t>(spec.sample_count));
    for (int i = 0; i < spec.sample_count; ++i) {
      State x = uniform_point(system.space, rng);
      if (spec.kind == MeasureKind::kSrbBurnin) {
        for (int k = 0; k < spec.burnin; ++k) x = system.map(x);
      }
      out.points.push_back(x);
    }
  }
  out.weights.assign(out.points.size(), 1.0 / out.points.size());
  return out;
}

SampleSet subset(const SampleSet& samples, const std::vector<std::size_t>& idx) {
  SampleSet out;
  out.system_name = samples.system_name;
  out.provenance = samples.provenance;
  double mass = 0.0;
  for (std::size_t i : idx) {
    out.points.push_back(samples.points.at(i));
    out.weights.push_back(samples.weights.at(i));
    mass += samples.weights[i];
  }
  for (double& w : out.weights) w /= mass;
  return out;
}

SampleSet point_mass(const SystemSpec& system, const State& x) {
  SampleSet out;
  out.system_name = system.name;
  out.points = {x};
  out.weights = {1.0};
  return out;
}

SampleSet trapped_samples(const SystemSpec& system, const SampleSet& samples,
                          int steps) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    State x = samples.points[i];
    bool inside = system.space.contains(x);
    for (int k = 0; inside && k < steps; ++k) {
      x = system.map(x);
      inside = system.space.contains(x);
    }
    if (inside) keep.push_back(i);
  }
  if (keep.empty()) {
    SampleSet out;
    out.system_name = samples.system_name;
    out.provenance = samples.provenance;
    return out;
  }
  return subset(samples, keep);
}

double invariance_gap(const SystemSpec& system, const SampleSet& samples,
                      const Partition& partition) {
  std::vector<double> before(partition.size(), 0.0);
  std::vector<double> after(partition.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const State& x = samples.points[i];
    before[static_cast<std::size_t>(partition.cell_of(x))] += samples.weights[i];
    after[static_cast<std::size_t>(partition.cell_of(system.map(x)))] +=
        samples.weights[i];
  }
  double tv = 0.0;
  for (std::size_t c = 0; c < before.size(); ++c) {
    tv += std::abs(before[c] - after[c]);
  }
  return std::min(1.0, tv / 2.0);
}

std::uint64_t CellCover::total_cells() const {
  std::uint64_t total = 1;
  for (int m : cells_per_axis) total *= static_cast<std::uint64_t>(m);
  return total;
}

std::uint64_t grid_cell_id(const StateSpace& space,
                           const std::vector<int>& cells_per_axis,
                           const State& x) {
  std::uint64_t id = 0;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const int m = cells_per_axis[i];
    auto c = static_cast<long long>(
        std::floor((x[i] - space.axis_lo(i)) / space.axis_extent(i) * m));
    c = std::clamp<long long>(c, 0, m - 1);
    id = id * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(c);
  }
  return id;
}

CellCover support_cover(const StateSpace& space, const SampleSet& samples,
                        double resolution) {
  if (!(resolution > 0.0)) {
    throw Error(ErrorCode::kBadParams, "resolution must be > 0");
  }
  CellCover cover;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    // Guard against ceil(1 / (1/64)) landing on 65 through rounding.
    const double cells = space.axis_extent(i) / resolution;
    cover.cells_per_axis.push_back(
        static_cast<int>(std::ceil(cells - 1e-9 * cells)));
  }
  for (const State& x : samples.points) {
    cover.cells.insert(grid_cell_id(space, cover.cells_per_axis, x));
  }
  return cover;
}

State centroid(const StateSpace& space, const SampleSet& samples) {
  const std::size_t d = space.dimension();
  std::array<double, State::kMaxDim> c{};
  for (std::size_t i = 0; i < d; ++i) {
    if (space.axis_periodic(i)) {
      double sx = 0.0;
      double sy = 0.0;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const double a = 2.0 * std::numbers::pi * samples.points[k][i];
        sx += samples.weights[k] * std::cos(a);
        sy += samples.weights[k] * std::sin(a);
      }
      const double angle = (std::abs(sx) + std::abs(sy) < 1e-12)
                               ? 0.0
                               : std::atan2(sy, sx) / (2.0 * std::numbers::pi);
      c[i] = wrap_unit(angle);
    } else {
      double s = 0.0;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        s += samples.weights[k] * samples.points[k][i];
      }
      c[i] = s;
    }
  }
  return State(std::span<const double>(c.data(), d));
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  const std::size_t d = samples.empty() ? 0 : samples.points.front().size();
  for (std::size_t i = 0; i < d; ++i) out << (i ? ",x" : "x") << i;
  out << '\n';
  char buf[32];
  for (const State& x : samples.points) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", x[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

SampleSet read_samples_csv(std::istream& in, std::size_t dimension) {
  SampleSet out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, State::kMaxDim> c{};
    std::stringstream ss(line);
    std::string field;
    std::size_t i = 0;
    while (std::getline(ss, field, ',')) {
      if (i >= dimension) {
        throw Error(ErrorCode::kConfig, "too many columns in sample row");
      }
      c[i++] = std::stod(field);
    }
    if (i != dimension) {
      throw Error(ErrorCode::kConfig, "too few columns in sample row");
    }
    out.points.emplace_back(std::span<const double>(c.data(), dimension));
  }
  out.weights.assign(out.points.size(),
                     out.points.empty() ? 0.0 : 1.0 / out.points.size());
  return out;
}

}  // namespace entrocode
