#include "chisq/identities.hpp"

#include <cmath>
#include <numbers>

#include "chisq/closedform.hpp"
#include "chisq/error.hpp"
#include "chisq/parallel.hpp"

namespace chisq {

namespace {

constexpr double kPi = std::numbers::pi;

// Importance sampling with a widened Gaussian proposal, so the estimator is
// not the trivial constant it would be with the target itself.
constexpr double kWide = 1.3;

struct Mean {
  double sum = 0, sum_sq = 0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double value() const { return sum / n; }
  double error() const {
    const double m = value();
    return std::sqrt(std::max(0.0, sum_sq / n - m * m) / (n - 1));
  }
};

// Ratio target/proposal for one coordinate on the real line.
double normal_ratio(double x) {
  return kWide * std::exp(-0.5 * x * x * (1 - 1 / (kWide * kWide)));
}

}  // namespace

IdentityCheck symmetric_matrix_identity(std::uint64_t seed, std::size_t samples) {
  if (samples < 2) fail_validation("range", "need at least two samples");
  Rng lhs_rng(derive_seed(seed, 1));
  Rng rhs_rng(derive_seed(seed, 2));
  const double gauss = std::sqrt(2 * kPi) * kWide;  // normalizer of one proposal coordinate

  // Diagonal entries enter Tr H^2 once, off-diagonal twice.
  Mean lhs;
  for (std::size_t i = 0; i < samples; ++i) {
    double inv_q = 1.0;
    double tr = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double x = kWide * standard_normal(lhs_rng);
      tr += (k < 3 ? 1.0 : 2.0) * x * x;
      inv_q *= gauss * std::exp(0.5 * x * x / (kWide * kWide));
    }
    lhs.add(std::exp(-0.5 * tr) * inv_q);
  }

  Mean rhs;
  for (std::size_t i = 0; i < samples; ++i) {
    double l[3];
    double ratio = 1.0;
    for (double& v : l) {
      v = kWide * standard_normal(rhs_rng);
      ratio *= normal_ratio(v);
    }
    const double delta = std::abs((l[2] - l[1]) * (l[2] - l[0]) * (l[1] - l[0]));
    rhs.add(delta * ratio);
  }
  const double factor = haar_volume(Group::O, 3) / 48.0 * std::pow(2 * kPi, 1.5);

  IdentityCheck out;
  out.lhs = lhs.value();
  out.lhs_error = lhs.error();
  out.rhs = factor * rhs.value();
  out.rhs_error = factor * rhs.error();
  out.exact = std::pow(2.0, 1.5) * kPi * kPi * kPi;
  return out;
}

IdentityCheck rectangular_matrix_identity(int n, std::uint64_t seed, std::size_t samples) {
  if (n < 3) fail_validation("range", "the rectangular identity needs n >= 3");
  if (samples < 2) fail_validation("range", "need at least two samples");
  Rng lhs_rng(derive_seed(seed, 3));
  Rng rhs_rng(derive_seed(seed, 4));
  const double line = std::sqrt(2 * kPi);

  Mean lhs;
  for (std::size_t i = 0; i < samples; ++i) {
    double ratio = 1.0;
    for (int k = 0; k < 3 * n; ++k) ratio *= normal_ratio(kWide * standard_normal(lhs_rng));
    lhs.add(ratio);
  }

  // a, b, c on the half line: proposal is a half-normal of width kWide.
  Mean rhs;
  for (std::size_t i = 0; i < samples; ++i) {
    double ratio = 1.0;
    double diag[3];
    for (double& v : diag) {
      v = std::abs(kWide * standard_normal(rhs_rng));
      ratio *= normal_ratio(v) / 2.0;
    }
    for (int k = 0; k < 3; ++k) ratio *= normal_ratio(kWide * standard_normal(rhs_rng));
    rhs.add(ratio * std::pow(diag[0], n - 1) * std::pow(diag[1], n - 2) * std::pow(diag[2], n - 3));
  }
  const double rhs_factor = 8 * std::pow(kPi, 1.5 * n) / multivariate_gamma(3, 0.5 * n) * std::pow(line, 6);

  IdentityCheck out;
  out.lhs = std::pow(line, 3 * n) * lhs.value();
  out.lhs_error = std::pow(line, 3 * n) * lhs.error();
  out.rhs = rhs_factor * rhs.value();
  out.rhs_error = rhs_factor * rhs.error();
  out.exact = std::pow(2 * kPi, 1.5 * n);
  return out;
}

}  // namespace chisq
