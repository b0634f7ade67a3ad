#include "entrocode/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entrocode/error.hpp"

namespace entrocode {

Partition::Partition(StateSpace space, std::vector<Cell> cells, Locator locate)
    : space_(space), cells_(std::move(cells)), locate_(std::move(locate)) {
  for (const Cell& c : cells_) max_diameter_ = std::max(max_diameter_, c.diameter);
}

Partition grid_partition(const StateSpace& space, int cells_per_axis) {
  return grid_partition(
      space, std::vector<int>(space.dimension(), cells_per_axis));
}

Partition grid_partition(const StateSpace& space,
                         const std::vector<int>& cells_per_axis) {
  const std::size_t d = space.dimension();
  if (cells_per_axis.size() != d) {
    throw Error(ErrorCode::kBadParams, "one cell count per axis required");
  }
  std::array<double, State::kMaxDim> side{};
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (cells_per_axis[i] < 1) {
      throw Error(ErrorCode::kBadParams, "cells_per_axis must be >= 1");
    }
    side[i] = space.axis_extent(i) / cells_per_axis[i];
    total *= static_cast<std::uint64_t>(cells_per_axis[i]);
  }
  if (total > (std::uint64_t{1} << 31)) {
    throw Error(ErrorCode::kBadParams, "grid partition too large");
  }
  const double diameter = space.box_diameter({side.data(), d});

  std::vector<Cell> cells;
  cells.reserve(total);
  std::array<int, State::kMaxDim> idx{};
  for (std::uint64_t k = 0; k < total; ++k) {
    std::uint64_t r = k;
    for (std::size_t i = d; i-- > 0;) {
      idx[i] = static_cast<int>(r % cells_per_axis[i]);
      r /= cells_per_axis[i];
    }
    std::array<double, State::kMaxDim> centre{};
    std::array<double, State::kMaxDim> nearest{};
    for (std::size_t i = 0; i < d; ++i) {
      const double lo = space.axis_lo(i) + idx[i] * side[i];
      centre[i] = lo + side[i] / 2.0;
      nearest[i] = std::clamp(0.0, lo, lo + side[i]);
    }
    State rep(std::span<const double>(centre.data(), d));
    if (space.kind() == SpaceKind::kSolidTorus && !space.contains(rep)) {
      // Boundary cell: take the point of the cell box closest to the disk
      // axis, which lies in the disk whenever the cell meets it.
      rep[1] = nearest[1];
      rep[2] = nearest[2];
    }
    cells.push_back({static_cast<Symbol>(k), rep, diameter});
  }

  auto locate = [space, cells_per_axis](const State& x) {
    std::uint64_t id = 0;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
      const int m = cells_per_axis[i];
      auto c = static_cast<long long>(
          std::floor((x[i] - space.axis_lo(i)) / space.axis_extent(i) * m));
      c = std::clamp<long long>(c, 0, m - 1);
      id = id * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(c);
    }
    return static_cast<Symbol>(id);
  };
  return Partition(space, std::move(cells), std::move(locate));
}

Partition solenoid_partition(const SystemSpec& solenoid, int forward_bits,
                             int backward_bits) {
  if (solenoid.space.kind() != SpaceKind::kSolidTorus) {
    throw Error(ErrorCode::kBadParams, "solenoid partition needs the solid torus");
  }
  if (forward_bits < 0 || backward_bits < 0 || forward_bits + backward_bits > 24) {
    throw Error(ErrorCode::kBadParams, "bit counts out of range");
  }
  const int m = forward_bits;
  const int r = backward_bits;
  const double w = std::ldexp(1.0, -m);
  // On the attractor z = sum_{j>=1} 4^{-(j-1)} e(theta_{-j}) / 2 with
  // theta_{-j} known to within w 2^{-j} inside a cell and unknown beyond
  // j = r, where the remainder has norm <= (2/3) 4^{-r}. A chord is at most
  // 2 pi times the arc, so the distance to the representative is at most
  // the radius below.
  double disk = 0.0;
  for (int j = 1; j <= r; ++j) {
    disk += std::pow(0.25, j - 1) * std::numbers::pi * w * std::ldexp(1.0, -j) / 2.0;
  }
  disk += (2.0 / 3.0) * std::pow(0.25, r);
  const double radius = std::max(w / 2.0, disk);
  const double diameter = std::min(solenoid.space.diameter(), 2.0 * radius);

  const std::uint32_t count = std::uint32_t{1} << (m + r);
  std::vector<Cell> cells;
  cells.reserve(count);
  for (std::uint32_t id = 0; id < count; ++id) {
    const std::uint32_t arc = id >> r;
    double theta = (arc + 0.5) * w;
    // Walk back along the branch bits, then forward from the disk centre.
    for (int j = 1; j <= r; ++j) {
      const std::uint32_t bit = (id >> (r - j)) & 1u;
      theta = (theta + bit) / 2.0;
    }
    State x{theta, 0.0, 0.0};
    for (int j = 0; j < r; ++j) x = solenoid.map(x);
    cells.push_back({id, x, diameter});
  }

  auto locate = [m, r](const State& p) {
    State x = p;
    const auto arc = static_cast<std::uint32_t>(
        std::min<double>(std::floor(x[0] * std::ldexp(1.0, m)),
                         std::ldexp(1.0, m) - 1.0));
    std::uint32_t bits = 0;
    for (int j = 0; j < r; ++j) {
      // The branch whose preimage lands closest to the disk axis.
      double best = INFINITY;
      State pick;
      std::uint32_t bit = 0;
      for (std::uint32_t b = 0; b < 2; ++b) {
        const double theta = x[0] / 2.0 + 0.5 * b;
        const double a = 2.0 * std::numbers::pi * theta;
        const double u = 4.0 * (x[1] - std::cos(a) / 2.0);
        const double v = 4.0 * (x[2] - std::sin(a) / 2.0);
        const double r2 = u * u + v * v;
        if (r2 < best) {
          best = r2;
          pick = State{theta, u, v};
          bit = b;
        }
      }
      x = pick;
      bits = (bits << 1) | bit;
    }
    return static_cast<Symbol>((arc << r) | bits);
  };
  return Partition(solenoid.space, std::move(cells), std::move(locate));
}

ItineraryString itinerary(const SystemSpec& system, const Partition& partition,
                          const State& x, int n) {
  if (n < 1) throw Error(ErrorCode::kBadParams, "itinerary depth must be >= 1");
  ItineraryString s;
  s.symbols.resize(static_cast<std::size_t>(n));
  itinerary_into(system, partition, x, s.symbols);
  return s;
}

void itinerary_into(const SystemSpec& system, const Partition& partition,
                    State x, std::span<Symbol> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (j) x = system.map(x);
    out[j] = partition.cell_of(x);
  }
}

}  // namespace entrocode
