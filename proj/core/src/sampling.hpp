#pragma once

#include <cmath>
#include <numbers>

#include "chisq/integrand.hpp"

namespace chisq::detail {

// Orthonormal frame: e1 along (1,1,1), e2 and e3 traceless.
inline constexpr double kInvSqrt3 = 0.57735026918962576451;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt6 = 0.40824829046386301637;

// Eigenvalues from whitened coordinates u, for which the Lambda part of Q is u.u.
struct Whitening {
  double center;    // each eigenvalue's offset, -gamma nu / 3
  double s_trace;   // sqrt((1 - gamma^2)/3)
  double s_free;    // 1/sqrt(7.5)

  Whitening(double gamma, double nu_bar)
      : center(-gamma * nu_bar / 3), s_trace(std::sqrt((1 - gamma * gamma) / 3)), s_free(1 / std::sqrt(7.5)) {}

  EigenTriple eigen(const double* u) const {
    const double t = s_trace * u[0] * kInvSqrt3;
    const double p = s_free * u[1];
    const double q = s_free * u[2];
    return EigenTriple(center + t + p * kInvSqrt2 + q * kInvSqrt6, center + t - p * kInvSqrt2 + q * kInvSqrt6,
                       center + t - 2 * q * kInvSqrt6);
  }

  // |d lambda / d u|
  double jacobian() const { return s_trace * s_free * s_free; }
};

}  // namespace chisq::detail
