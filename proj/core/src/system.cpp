#include "entrocode/system.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "entrocode/error.hpp"

namespace entrocode {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kGridBits = 53;
constexpr std::uint64_t kGridMask = (std::uint64_t{1} << kGridBits) - 1;

std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// x -> m x mod 1 on the 2^-53 grid. Plain floating point shifts one bit out
// per step and sends every orbit to 0 within 53 steps, so the vacated low
// digit is refilled from a hash of the state.
double expand_mod1(double x, std::uint64_t m) noexcept {
  const auto u = static_cast<std::uint64_t>(x * 0x1p53) & kGridMask;
  const std::uint64_t v = (u * m + mix(u) % m) & kGridMask;
  return static_cast<double>(v) * 0x1p-53;
}

std::string describe(const State& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(x[i]);
  }
  return out + ")";
}

void require_in_domain(const SystemSpec& system, const State& x) {
  if (!system.space.contains(x)) {
    throw Error(ErrorCode::kStateOutOfDomain,
                system.name + " state " + describe(x));
  }
}

SystemSpec expanding_circle(std::string name, int degree) {
  SystemSpec s;
  s.name = std::move(name);
  s.space = StateSpace::circle();
  s.params = {static_cast<double>(degree)};
  s.lipschitz = degree;
  s.invertible = false;
  s.has_jacobian = true;
  s.map = [degree](const State& x) {
    return State{expand_mod1(x[0], static_cast<std::uint64_t>(degree))};
  };
  s.jacobian_fn = [degree](const State&) {
    return Matrix::Constant(1, 1, static_cast<double>(degree));
  };
  return s;
}

SystemSpec cat_map() {
  SystemSpec s;
  s.name = "cat_map";
  s.space = StateSpace::torus2();
  // A is symmetric positive definite, so its spectral norm is its largest
  // eigenvalue (3 + sqrt 5) / 2.
  s.lipschitz = (3.0 + std::sqrt(5.0)) / 2.0;
  s.invertible = true;
  s.has_jacobian = true;
  s.map = [](const State& x) {
    return State{wrap_unit(2.0 * x[0] + x[1]), wrap_unit(x[0] + x[1])};
  };
  s.inverse = [](const State& x) {
    return State{wrap_unit(x[0] - x[1]), wrap_unit(2.0 * x[1] - x[0])};
  };
  s.jacobian_fn = [](const State&) {
    Matrix a(2, 2);
    a << 2.0, 1.0, 1.0, 1.0;
    return a;
  };
  return s;
}

SystemSpec solenoid() {
  SystemSpec s;
  s.name = "solenoid";
  s.space = StateSpace::solid_torus();
  // theta doubles; the disk part contracts by 1/4 and the forcing term
  // (cos, sin)(2 pi theta) / 2 is pi-Lipschitz in the circle metric.
  s.lipschitz = std::numbers::pi + 0.25;
  s.invertible = true;
  s.has_jacobian = true;
  s.map = [](const State& p) {
    const double a = kTwoPi * p[0];
    return State{expand_mod1(p[0], 2), p[1] / 4.0 + std::cos(a) / 2.0,
                 p[2] / 4.0 + std::sin(a) / 2.0};
  };
  s.inverse = [name = s.name](const State& p) {
    State best;
    double best_r2 = INFINITY;
    for (double shift : {0.0, 0.5}) {
      const double theta = p[0] / 2.0 + shift;
      const double a = kTwoPi * theta;
      const double x = 4.0 * (p[1] - std::cos(a) / 2.0);
      const double y = 4.0 * (p[2] - std::sin(a) / 2.0);
      const double r2 = x * x + y * y;
      if (r2 < best_r2) {
        best_r2 = r2;
        best = State{theta, x, y};
      }
    }
    if (best_r2 > 1.0 + 1e-9) {
      throw Error(ErrorCode::kStateOutOfDomain,
                  name + " inverse undefined off the image " + describe(p));
    }
    return best;
  };
  s.jacobian_fn = [](const State& p) {
    const double a = kTwoPi * p[0];
    Matrix j = Matrix::Zero(3, 3);
    j(0, 0) = 2.0;
    j(1, 0) = -std::numbers::pi * std::sin(a);
    j(1, 1) = 0.25;
    j(2, 0) = std::numbers::pi * std::cos(a);
    j(2, 2) = 0.25;
    return j;
  };
  return s;
}

SystemSpec henon_like(double a, double b) {
  if (b == 0.0) throw Error(ErrorCode::kBadParams, "henon_like needs b != 0");
  SystemSpec s;
  s.name = "henon_like";
  s.space = StateSpace::plane_box(-4.0, 4.0);
  s.params = {a, b};
  // sup of the spectral norm of [[-2x, -b], [1, 0]] over |x| <= 4.
  const double c = 8.0;
  const double t = c * c + b * b + 1.0;
  s.lipschitz = std::sqrt((t + std::sqrt(t * t - 4.0 * b * b)) / 2.0);
  s.invertible = true;
  s.has_jacobian = true;
  s.map = [a, b](const State& p) {
    return State{a - b * p[1] - p[0] * p[0], p[0]};
  };
  s.inverse = [a, b](const State& p) {
    return State{p[1], (a - p[0] - p[1] * p[1]) / b};
  };
  s.jacobian_fn = [b](const State& p) {
    Matrix j(2, 2);
    j << -2.0 * p[0], -b, 1.0, 0.0;
    return j;
  };
  return s;
}

SystemSpec tent() {
  SystemSpec s;
  s.name = "tent";
  s.space = StateSpace::interval(0.0, 1.0);
  s.lipschitz = 2.0;
  s.invertible = false;
  s.has_jacobian = true;
  s.map = [](const State& x) {
    const auto u = static_cast<std::uint64_t>(x[0] * 0x1p53);
    const std::uint64_t r = mix(u) & 1;
    const std::uint64_t half = std::uint64_t{1} << (kGridBits - 1);
    const std::uint64_t v = u < half ? 2 * u + r : 4 * half - 2 * u - r;
    return State{static_cast<double>(v) * 0x1p-53};
  };
  s.jacobian_fn = [](const State& x) {
    return Matrix::Constant(1, 1, x[0] < 0.5 ? 2.0 : -2.0);
  };
  return s;
}

SystemSpec identity() {
  SystemSpec s;
  s.name = "identity";
  s.space = StateSpace::circle();
  s.lipschitz = 1.0;
  s.invertible = true;
  s.has_jacobian = true;
  s.map = [](const State& x) { return x; };
  s.inverse = [](const State& x) { return x; };
  s.jacobian_fn = [](const State&) { return Matrix::Identity(1, 1); };
  return s;
}

const std::array<std::string, 7> kLibraryNames = {
    "doubling", "expanding_circle", "cat_map", "solenoid",
    "henon_like", "tent", "identity"};

}  // namespace

State iterate(const SystemSpec& system, const State& x, int n) {
  if (n < 0 && !system.invertible) {
    throw Error(ErrorCode::kNegativePowerOfNoninvertibleMap,
                system.name + " has no inverse");
  }
  require_in_domain(system, x);
  State y = x;
  const bool bounded = system.space.kind() != SpaceKind::kCircle &&
                       system.space.kind() != SpaceKind::kTorus2;
  const auto& step = n >= 0 ? system.map : system.inverse;
  for (int i = 0, steps = std::abs(n); i < steps; ++i) {
    y = step(y);
    if (bounded) require_in_domain(system, y);
  }
  return y;
}

double bowen_distance(const SystemSpec& system, const State& x, const State& y,
                      int n) {
  if (n < 1) throw Error(ErrorCode::kBadParams, "bowen_distance needs n >= 1");
  require_in_domain(system, x);
  require_in_domain(system, y);
  State a = x;
  State b = y;
  double d = system.space.distance(a, b);
  for (int i = 1; i < n; ++i) {
    a = system.map(a);
    b = system.map(b);
    d = std::max(d, system.space.distance(a, b));
  }
  return d;
}

Matrix jacobian(const SystemSpec& system, const State& x) {
  if (!system.has_jacobian || !system.jacobian_fn) {
    throw Error(ErrorCode::kJacobianUnavailable, system.name);
  }
  return system.jacobian_fn(x);
}

Matrix finite_difference_jacobian(const SystemSpec& system, const State& x,
                                  double step) {
  const std::size_t d = system.space.dimension();
  Matrix j(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    State lo = x;
    State hi = x;
    lo[col] -= step;
    hi[col] += step;
    const State flo = system.map(system.space.canonical(lo));
    const State fhi = system.map(system.space.canonical(hi));
    for (std::size_t row = 0; row < d; ++row) {
      double diff = fhi[row] - flo[row];
      if (system.space.axis_periodic(row)) diff = wrap_unit(diff + 0.5) - 0.5;
      j(row, col) = diff / (2.0 * step);
    }
  }
  return j;
}

std::span<const std::string> library_system_names() { return kLibraryNames; }

SystemSpec library_system(const std::string& name,
                          std::span<const double> params) {
  if (name == "doubling") return expanding_circle("doubling", 2);
  if (name == "expanding_circle") {
    const double degree = params.empty() ? 3.0 : params[0];
    if (degree < 2.0 || degree != std::floor(degree)) {
      throw Error(ErrorCode::kBadParams,
                  "expanding_circle degree must be an integer >= 2");
    }
    return expanding_circle("expanding_circle", static_cast<int>(degree));
  }
  if (name == "cat_map") return cat_map();
  if (name == "solenoid") return solenoid();
  if (name == "henon_like") {
    const double a = params.size() > 0 ? params[0] : 5.0;
    const double b = params.size() > 1 ? params[1] : 0.3;
    return henon_like(a, b);
  }
  if (name == "tent") return tent();
  if (name == "identity") return identity();
  throw Error(ErrorCode::kUnknownSystem, name);
}

OrbitSegment orbit(const SystemSpec& system, const State& x, int n) {
  if (n < 0) throw Error(ErrorCode::kBadParams, "orbit length must be >= 0");
  require_in_domain(system, x);
  OrbitSegment seg{x, {}};
  seg.states.reserve(static_cast<std::size_t>(n) + 1);
  seg.states.push_back(x);
  for (int i = 0; i < n; ++i) seg.states.push_back(system.map(seg.states.back()));
  return seg;
}

}  // namespace entrocode
