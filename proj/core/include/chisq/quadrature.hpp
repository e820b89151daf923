#pragma once

#include <functional>
#include <limits>

namespace chisq {

struct QuadratureConfig {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  unsigned max_depth = 30;
};

struct QuadratureResult {
  double value;
  double error;
};

// Adaptive Gauss-Kronrod (61 point) on [a, b]; either end may be infinite.
// Throws tolerance-not-met when the error estimate exceeds
// max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg = {});

}  // namespace chisq
