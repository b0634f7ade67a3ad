#pragma once

#include <vector>

#include "entrocode/system.hpp"

namespace entrocode {

/// Lyapunov exponents (bits per step, decreasing) along the orbit of x0.
///
/// The tangent frame is re-orthonormalised by a QR step after every Jacobian
/// application and log2 of the diagonal stretch factors is averaged over
/// `steps` iterations. `steps / 10` additional leading iterations align the
/// frame and are not averaged.
std::vector<double> lyapunov_spectrum(const SystemSpec& system, const State& x0,
                                      int steps);

struct PesinMargulisReport {
  double entropy = 0.0;
  double positive_sum = 0.0;  // sum of max(0, lambda_i)
  double tolerance = 0.0;
  bool inequality_holds = false;  // entropy <= positive_sum + tolerance
  bool equality = false;          // |entropy - positive_sum| <= tolerance
};

PesinMargulisReport pesin_margulis_check(double h_estimate,
                                         const std::vector<double>& exponents,
                                         double tolerance);

}  // namespace entrocode
