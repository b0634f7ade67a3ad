#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "entrocode/state.hpp"
#include "entrocode/system.hpp"

namespace entrocode {

using Symbol = std::uint32_t;

struct Cell {
  Symbol id = 0;
  State representative;
  double diameter = 0.0;
};

/// Finite Borel partition of a state space. Cell ids are 0-based and index
/// `cells()`.
class Partition {
 public:
  using Locator = std::function<Symbol(const State&)>;

  Partition(StateSpace space, std::vector<Cell> cells, Locator locate);

  const StateSpace& space() const noexcept { return space_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  double max_diameter() const noexcept { return max_diameter_; }

  Symbol cell_of(const State& x) const { return locate_(x); }
  const Cell& cell(Symbol id) const { return cells_.at(id); }

 private:
  StateSpace space_;
  std::vector<Cell> cells_;
  Locator locate_;
  double max_diameter_ = 0.0;
};

/// Uniform axis-aligned partition with `cells_per_axis` cells on every axis
/// of the space's bounding box.
Partition grid_partition(const StateSpace& space, int cells_per_axis);

/// Grid partition with a separate cell count per axis.
Partition grid_partition(const StateSpace& space,
                         const std::vector<int>& cells_per_axis);

/// Partition of the solid torus adapted to the solenoid attractor. A cell
/// fixes the first `forward_bits` binary digits of theta and the
/// `backward_bits` branch choices of the inverse orbit. Cell diameters are
/// bounds over the attractor, where the cells are small; off the attractor
/// the cells are not. Representatives lie on the attractor.
Partition solenoid_partition(const SystemSpec& solenoid, int forward_bits,
                             int backward_bits);

struct ItineraryString {
  std::vector<Symbol> symbols;
  int depth() const noexcept { return static_cast<int>(symbols.size()); }
  friend auto operator<=>(const ItineraryString&,
                          const ItineraryString&) = default;
};

/// Cells visited by x, f(x), ..., f^{n-1}(x).
ItineraryString itinerary(const SystemSpec& system, const Partition& partition,
                          const State& x, int n);

/// Writes the length-n itinerary of x into `out` (size n) without allocating.
void itinerary_into(const SystemSpec& system, const Partition& partition,
                    State x, std::span<Symbol> out);

}  // namespace entrocode
