#include "entrocode/state.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace entrocode {

State::State(std::initializer_list<double> coords)
    : State(std::span<const double>(coords.begin(), coords.size())) {}

State::State(std::span<const double> coords) {
  assert(coords.size() <= kMaxDim);
  size_ = static_cast<std::uint8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), v_.begin());
}

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::kCircle:
      return "circle";
    case SpaceKind::kTorus2:
      return "torus2";
    case SpaceKind::kInterval:
      return "interval";
    case SpaceKind::kSolidTorus:
      return "solid_torus";
    case SpaceKind::kPlaneBox:
      return "plane_box";
  }
  return "unknown";
}

StateSpace::StateSpace(SpaceKind kind, std::size_t dim, double lo, double hi)
    : kind_(kind), dim_(dim), lo_(lo), hi_(hi), diameter_(0.0) {
  switch (kind) {
    case SpaceKind::kCircle:
      diameter_ = 0.5;
      break;
    case SpaceKind::kTorus2:
      diameter_ = std::sqrt(0.5);
      break;
    case SpaceKind::kInterval:
      diameter_ = hi - lo;
      break;
    case SpaceKind::kSolidTorus:
      diameter_ = 2.0;
      break;
    case SpaceKind::kPlaneBox:
      diameter_ = (hi - lo) * std::sqrt(2.0);
      break;
  }
}

StateSpace StateSpace::circle() { return {SpaceKind::kCircle, 1, 0.0, 1.0}; }
StateSpace StateSpace::torus2() { return {SpaceKind::kTorus2, 2, 0.0, 1.0}; }
StateSpace StateSpace::interval(double lo, double hi) {
  return {SpaceKind::kInterval, 1, lo, hi};
}
StateSpace StateSpace::solid_torus() {
  return {SpaceKind::kSolidTorus, 3, -1.0, 1.0};
}
StateSpace StateSpace::plane_box(double lo, double hi) {
  return {SpaceKind::kPlaneBox, 2, lo, hi};
}

bool StateSpace::axis_periodic(std::size_t axis) const noexcept {
  switch (kind_) {
    case SpaceKind::kCircle:
    case SpaceKind::kTorus2:
      return true;
    case SpaceKind::kSolidTorus:
      return axis == 0;
    default:
      return false;
  }
}

double StateSpace::axis_lo(std::size_t axis) const noexcept {
  return axis_periodic(axis) ? 0.0 : lo_;
}

double StateSpace::axis_hi(std::size_t axis) const noexcept {
  return axis_periodic(axis) ? 1.0 : hi_;
}

double StateSpace::distance(const State& a, const State& b) const noexcept {
  switch (kind_) {
    case SpaceKind::kCircle:
      return circle_distance(a[0], b[0]);
    case SpaceKind::kTorus2:
      return std::hypot(circle_distance(a[0], b[0]),
                        circle_distance(a[1], b[1]));
    case SpaceKind::kInterval:
      return std::abs(a[0] - b[0]);
    case SpaceKind::kSolidTorus:
      return std::max(circle_distance(a[0], b[0]),
                      std::hypot(a[1] - b[1], a[2] - b[2]));
    case SpaceKind::kPlaneBox:
      return std::hypot(a[0] - b[0], a[1] - b[1]);
  }
  return 0.0;
}

bool StateSpace::contains(const State& x) const noexcept {
  if (x.size() != dim_) return false;
  for (double c : x) {
    if (!std::isfinite(c)) return false;
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    if (axis_periodic(i)) {
      if (x[i] < 0.0 || x[i] >= 1.0) return false;
    } else if (x[i] < lo_ || x[i] > hi_) {
      return false;
    }
  }
  if (kind_ == SpaceKind::kSolidTorus) {
    return x[1] * x[1] + x[2] * x[2] <= 1.0 + 1e-12;
  }
  return true;
}

State StateSpace::canonical(State x) const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (axis_periodic(i)) x[i] = wrap_unit(x[i]);
  }
  return x;
}

double StateSpace::box_diameter(std::span<const double> sides) const noexcept {
  auto periodic_side = [](double s) { return std::min(s, 0.5); };
  switch (kind_) {
    case SpaceKind::kCircle:
      return periodic_side(sides[0]);
    case SpaceKind::kTorus2:
      return std::hypot(periodic_side(sides[0]), periodic_side(sides[1]));
    case SpaceKind::kInterval:
      return sides[0];
    case SpaceKind::kSolidTorus:
      return std::max(periodic_side(sides[0]),
                      std::min(2.0, std::hypot(sides[1], sides[2])));
    case SpaceKind::kPlaneBox:
      return std::hypot(sides[0], sides[1]);
  }
  return 0.0;
}

}  // namespace entrocode
