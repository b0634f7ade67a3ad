#include "entrocode/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "entrocode/error.hpp"

namespace entrocode {

std::vector<double> lyapunov_spectrum(const SystemSpec& system, const State& x0,
                                      int steps) {
  if (!system.has_jacobian) {
    throw Error(ErrorCode::kJacobianUnavailable, system.name);
  }
  if (steps < 100) throw Error(ErrorCode::kBadParams, "steps must be >= 100");
  if (!system.space.contains(x0)) {
    throw Error(ErrorCode::kStateOutOfDomain, "lyapunov initial state");
  }
  const auto d = static_cast<Eigen::Index>(system.space.dimension());
  Matrix frame = Matrix::Identity(d, d);
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(d);
  const int warmup = steps / 10;
  State x = x0;
  for (int t = 0; t < warmup + steps; ++t) {
    Eigen::HouseholderQR<Matrix> qr(jacobian(system, x) * frame);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    frame = qr.householderQ() * Matrix::Identity(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double stretch = std::abs(r(i, i));
      if (!(stretch > 1e-300) || !std::isfinite(stretch)) {
        throw Error(ErrorCode::kDegenerateFrame,
                    "stretch factor underflow at step " + std::to_string(t));
      }
      if (t >= warmup) sums(i) += std::log2(stretch);
    }
    x = system.map(x);
  }
  std::vector<double> out(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = sums(i) / steps;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

PesinMargulisReport pesin_margulis_check(double h_estimate,
                                         const std::vector<double>& exponents,
                                         double tolerance) {
  PesinMargulisReport r;
  r.entropy = h_estimate;
  r.tolerance = tolerance;
  for (double l : exponents) r.positive_sum += std::max(0.0, l);
  r.inequality_holds = h_estimate <= r.positive_sum + tolerance;
  r.equality = std::abs(h_estimate - r.positive_sum) <= tolerance;
  return r;
}

}  // namespace entrocode
