#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

namespace entrocode {

/// A point of a state space with at most three coordinates, stored inline.
class State {
 public:
  static constexpr std::size_t kMaxDim = 3;

  State() = default;
  State(std::initializer_list<double> coords);
  explicit State(std::span<const double> coords);

  std::size_t size() const noexcept { return size_; }
  double operator[](std::size_t i) const noexcept { return v_[i]; }
  double& operator[](std::size_t i) noexcept { return v_[i]; }

  const double* begin() const noexcept { return v_.data(); }
  const double* end() const noexcept { return v_.data() + size_; }
  double* begin() noexcept { return v_.data(); }
  double* end() noexcept { return v_.data() + size_; }

  friend bool operator==(const State& a, const State& b) noexcept {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i) {
      if (a.v_[i] != b.v_[i]) return false;
    }
    return true;
  }

 private:
  std::array<double, kMaxDim> v_{};
  std::uint8_t size_ = 0;
};

enum class SpaceKind { kCircle, kTorus2, kInterval, kSolidTorus, kPlaneBox };

std::string_view to_string(SpaceKind kind);

/// Compact metric state space. Periodic axes live in [0,1); bounded axes in
/// [lo, hi]. The solid torus is S^1 x D^2 with the max of the circle metric
/// and the Euclidean disk metric.
class StateSpace {
 public:
  static StateSpace circle();
  static StateSpace torus2();
  static StateSpace interval(double lo, double hi);
  static StateSpace solid_torus();
  static StateSpace plane_box(double lo, double hi);

  SpaceKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dim_; }
  double diameter() const noexcept { return diameter_; }

  bool axis_periodic(std::size_t axis) const noexcept;
  double axis_lo(std::size_t axis) const noexcept;
  double axis_hi(std::size_t axis) const noexcept;
  double axis_extent(std::size_t axis) const noexcept {
    return axis_hi(axis) - axis_lo(axis);
  }

  double distance(const State& a, const State& b) const noexcept;
  bool contains(const State& x) const noexcept;

  /// Reduces periodic coordinates into [0,1).
  State canonical(State x) const noexcept;

  /// Metric diameter of an axis-aligned box with the given side lengths.
  double box_diameter(std::span<const double> sides) const noexcept;

 private:
  StateSpace(SpaceKind kind, std::size_t dim, double lo, double hi);

  SpaceKind kind_;
  std::size_t dim_;
  double lo_;
  double hi_;
  double diameter_;
};

/// Wraps a real number into [0,1).
inline double wrap_unit(double v) noexcept {
  double r = v - static_cast<double>(static_cast<long long>(v));
  if (r < 0.0) r += 1.0;
  if (r >= 1.0) r -= 1.0;
  return r;
}

/// Arc-length distance on the unit-circumference circle.
inline double circle_distance(double a, double b) noexcept {
  double d = a - b;
  if (d < 0.0) d = -d;
  d -= static_cast<double>(static_cast<long long>(d));
  return d > 0.5 ? 1.0 - d : d;
}

}  // namespace entrocode
