#include "chisq/closedform.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "chisq/error.hpp"
#include "chisq/quadrature.hpp"

namespace chisq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

double lgam(double x) { return boost::math::lgamma(x); }

// log of (6 pi)^{-3/2} (sigma1/sigma0)^3 / (2^{N/2-1} Gamma(N/2))
double log_density_constant(int N, double sigma0, double sigma1) {
  return 3.0 * std::log(sigma1 / sigma0) - 1.5 * std::log(6 * kPi) - (0.5 * N - 1) * kLn2 - lgam(0.5 * N);
}


void require_gamma(double gamma) {
  if (!(gamma > 0 && gamma < 1))
    fail_validation("gamma-out-of-range", "gamma must lie strictly inside (0, 1), got " + std::to_string(gamma));
}

void require_sigmas(double sigma0, double sigma1) {
  if (!(sigma0 > 0 && sigma1 > 0)) fail_validation("range", "sigma0 and sigma1 must be positive");
}

bool is_gamma_pole(double x) { return x <= 0 && x == std::floor(x); }

}  // namespace

void require_supported_N(int N) {
  if (N < 4)
    fail_unsupported("unsupported-N", "N = " + std::to_string(N) +
                                          " is below 4; the field is dominated by topological defects "
                                          "(domain walls, strings, monopoles) and is out of scope");
}

double chi2_pdf(int N, double nu_bar) {
  if (N < 1) fail_validation("range", "N must be at least 1");
  if (!(nu_bar > 0)) return 0.0;
  const double logp =
      (N - 1) * std::log(nu_bar) - 0.5 * nu_bar * nu_bar - (0.5 * N - 1) * kLn2 - lgam(0.5 * N);
  return std::exp(logp);
}

double prefactor_alpha(double sigma0, double sigma1, double nu_bar) {
  if (!(nu_bar > 0)) fail_validation("nonpositive-nu", "nu_bar must be positive");
  require_sigmas(sigma0, sigma1);
  const double ratio = sigma1 / (sigma0 * nu_bar);
  return std::pow(6 * kPi, -1.5) * ratio * ratio * ratio;
}

double signed_expectation(int N, double nu_bar) {
  const double n = N;
  const double v2 = nu_bar * nu_bar;
  return (n - 1) * (n - 2) * (n - 3) - 3 * (n - 1) * (n - 1) * v2 + 3 * n * v2 * v2 - v2 * v2 * v2;
}

double signed_density(int N, double nu_bar, double sigma0, double sigma1) {
  require_supported_N(N);
  require_sigmas(sigma0, sigma1);
  if (nu_bar < 0) return 0.0;
  const double poly = signed_expectation(N, nu_bar);
  if (nu_bar == 0) return N == 4 ? poly * std::exp(log_density_constant(N, sigma0, sigma1)) : 0.0;
  const double logmag = log_density_constant(N, sigma0, sigma1) + (N - 4) * std::log(nu_bar) - 0.5 * nu_bar * nu_bar;
  return poly * std::exp(logmag);
}

double log_normalization_VN(int N, double gamma) {
  require_supported_N(N);
  require_gamma(gamma);
  return 1.5 * (N - 1) * kLn2 - 2.5 * std::log(5.0) - 3 * std::log(3.0) + std::log(kPi) +
         0.5 * std::log1p(-gamma * gamma) + log_multivariate_gamma(3, 0.5 * (N - 1));
}

double normalization_VN(int N, double gamma) { return std::exp(log_normalization_VN(N, gamma)); }

double multivariate_gamma(int m, double x) {
  if (m < 1) fail_validation("range", "multivariate Gamma needs m >= 1");
  double out = std::pow(kPi, 0.25 * m * (m - 1));
  for (int i = 1; i <= m; ++i) {
    const double arg = x - 0.5 * (i - 1);
    if (is_gamma_pole(arg)) fail_numerical("pole", "Gamma pole at argument " + std::to_string(arg));
    out *= boost::math::tgamma(arg);
  }
  return out;
}

double log_multivariate_gamma(int m, double x) {
  if (m < 1) fail_validation("range", "multivariate Gamma needs m >= 1");
  double out = 0.25 * m * (m - 1) * std::log(kPi);
  for (int i = 1; i <= m; ++i) {
    const double arg = x - 0.5 * (i - 1);
    if (is_gamma_pole(arg)) fail_numerical("pole", "Gamma pole at argument " + std::to_string(arg));
    if (arg < 0) fail_validation("range", "log multivariate Gamma needs positive arguments");
    out += lgam(arg);
  }
  return out;
}

double haar_volume(Group group, int n) {
  if (n < 1) fail_validation("range", "group dimension must be at least 1");
  double logv = n * kLn2 + 0.25 * n * (n + 1) * std::log(kPi);
  for (int j = 1; j <= n; ++j) logv -= lgam(0.5 * j);
  const double v = std::exp(logv);
  return group == Group::O ? v : 0.5 * v;
}

double gamma0_saddle_to_extremum_ratio() {
  const double a = 29 * std::numbers::sqrt2;
  const double b = 12 * std::numbers::sqrt3;
  return (a + b) / (a - b);
}

double limit_density(LimitKind kind, int N, double nu_bar, std::optional<double> gamma, double sigma0,
                     double sigma1) {
  require_supported_N(N);
  require_sigmas(sigma0, sigma1);
  if (!(nu_bar > 0)) fail_validation("nonpositive-nu", "nu_bar must be positive");
  const double n = N;
  switch (kind) {
    case LimitKind::maxima_large_nu:
      if (gamma) fail_validation("unsupported-kind-parameter", "the large-nu maxima limit takes no gamma");
      return prefactor_alpha(sigma0, sigma1, nu_bar) * chi2_pdf(N, nu_bar) * std::pow(nu_bar, 6);
    case LimitKind::minima_small_nu:
      if (gamma) fail_validation("unsupported-kind-parameter", "the small-nu minima limit takes no gamma");
      return prefactor_alpha(sigma0, sigma1, nu_bar) * chi2_pdf(N, nu_bar) * (n - 1) * (n - 2) * (n - 3);
    case LimitKind::gamma0_extremum:
    case LimitKind::gamma0_saddle: {
      if (!gamma) fail_validation("unsupported-kind-parameter", "the gamma -> 0 limits need gamma");
      require_gamma(*gamma);
      const double sign = kind == LimitKind::gamma0_saddle ? 1.0 : -1.0;
      const double coeff = (29 * std::numbers::sqrt2 + sign * 12 * std::numbers::sqrt3) /
                           (4 * std::pow(5.0, 1.5) * std::sqrt(kPi));
      const double ratio = sigma1 / sigma0;
      return coeff / std::pow(*gamma, 3) * std::pow(6 * kPi, -1.5) * ratio * ratio * ratio * chi2_pdf(N, nu_bar);
    }
  }
  fail_validation("unsupported-kind-parameter", "unknown limit kind");
}

ZeroSum signed_zero_sum(int N, double upper) {
  require_supported_N(N);
  double scale = 0.0;
  for (int i = 0; i <= 4000; ++i) scale = std::max(scale, std::abs(signed_density(N, upper * i / 4000.0)));
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-14 * scale;
  cfg.rel_tol = 0.0;
  double total = 0.0;
  // Panels of unit width keep each Kronrod rule well inside its polynomial regime.
  for (int k = 0; k < static_cast<int>(std::ceil(upper)); ++k) {
    const double a = k;
    const double b = std::min(upper, k + 1.0);
    total += integrate([N](double v) { return signed_density(N, v); }, a, b, cfg).value;
  }
  return {total, scale};
}

}  // namespace chisq
