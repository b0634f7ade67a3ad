#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "entrocode/state.hpp"

namespace entrocode {

using Matrix = Eigen::MatrixXd;

/// A named discrete-time map on a compact metric space.
///
/// `map` must return canonical states (periodic coordinates already reduced
/// mod 1). `lipschitz` is an analytic global Lipschitz constant of `map`
/// with respect to `space.distance`. `inverse` and `jacobian_fn` are empty
/// unless the corresponding flag is set.
struct SystemSpec {
  std::string name;
  StateSpace space = StateSpace::circle();
  std::vector<double> params;
  double lipschitz = 1.0;
  bool invertible = false;
  bool has_jacobian = false;

  std::function<State(const State&)> map;
  std::function<State(const State&)> inverse;
  std::function<Matrix(const State&)> jacobian_fn;

  State apply(const State& x) const { return map(x); }
};

/// f^n(x). Negative n requires an invertible system.
State iterate(const SystemSpec& system, const State& x, int n);

/// max_{0<=i<n} d(f^i x, f^i y).
double bowen_distance(const SystemSpec& system, const State& x, const State& y,
                      int n);

Matrix jacobian(const SystemSpec& system, const State& x);

/// Central finite-difference Jacobian, used to validate analytic Jacobians.
/// Periodic coordinates are differenced on the lifted (unwrapped) image.
Matrix finite_difference_jacobian(const SystemSpec& system, const State& x,
                                  double step = 1e-6);

/// Names accepted by library_system.
std::span<const std::string> library_system_names();

/// Builds one of the library systems: doubling, expanding_circle (params:
/// degree >= 2), cat_map, solenoid, henon_like (params: a, b; default 5, 0.3),
/// tent, identity.
SystemSpec library_system(const std::string& name,
                          std::span<const double> params = {});

struct OrbitSegment {
  State initial;
  std::vector<State> states;  // length n + 1, states[0] == initial
};

OrbitSegment orbit(const SystemSpec& system, const State& x, int n);

}  // namespace entrocode
