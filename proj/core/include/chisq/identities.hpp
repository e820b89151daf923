#pragma once

#include <cstdint>

namespace chisq {

struct IdentityCheck {
  double lhs;          // direct integral, Monte Carlo
  double lhs_error;
  double rhs;          // reduced-measure integral, Monte Carlo
  double rhs_error;
  double exact;        // closed form of either side
};

// \int d^6 H exp(-Tr H^2 / 2) over real symmetric 3x3 H against
// (1 / (2^3 3!)) Vol[O(3)] \int d^3 lambda Delta(lambda) exp(-sum lambda^2 / 2).
IdentityCheck symmetric_matrix_identity(std::uint64_t seed, std::size_t samples);

// \int d^{3n} A exp(-Tr A^T A / 2) over real n x 3 A against
// 8 pi^{3n/2} / Gamma_3(n/2) \int dT a^{n-1} b^{n-2} c^{n-3} exp(-Tr T^T T / 2).
IdentityCheck rectangular_matrix_identity(int n, std::uint64_t seed, std::size_t samples);

}  // namespace chisq
