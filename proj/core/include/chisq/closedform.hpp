#pragma once

#include <optional>

namespace chisq {

enum class LimitKind { maxima_large_nu, minima_small_nu, gamma0_extremum, gamma0_saddle };
enum class Group { O, SO };

// Throws unsupported-N below N = 4, where topological defects dominate.
void require_supported_N(int N);

// Height distribution of nu_bar = sqrt(Phi)/sigma0; zero for nu_bar <= 0.
double chi2_pdf(int N, double nu_bar);

// (6 pi)^{-3/2} (sigma1/sigma0)^3 nu_bar^{-3}
double prefactor_alpha(double sigma0, double sigma1, double nu_bar);

// <det(3 nu_bar Lambda / gamma + M)>, the signed expectation polynomial.
double signed_expectation(int N, double nu_bar);

// Signed number density per unit nu_bar in units of (sigma1/sigma0)^3. N >= 4.
double signed_density(int N, double nu_bar, double sigma0 = 1.0, double sigma1 = 1.0);

// Unnormalized integral of the 9-dim weight over the ordered wedge.
double normalization_VN(int N, double gamma);
double log_normalization_VN(int N, double gamma);

// Gamma_m(x) = pi^{m(m-1)/4} prod_{i=1}^m Gamma(x - (i-1)/2)
double multivariate_gamma(int m, double x);
double log_multivariate_gamma(int m, double x);  // requires every argument positive

double haar_volume(Group group, int n);

// Asymptotic densities in units of (sigma1/sigma0)^3. The gamma0 kinds need gamma.
double limit_density(LimitKind kind, int N, double nu_bar, std::optional<double> gamma = std::nullopt,
                     double sigma0 = 1.0, double sigma1 = 1.0);

// (29 sqrt2 + 12 sqrt3) / (29 sqrt2 - 12 sqrt3)
double gamma0_saddle_to_extremum_ratio();

struct ZeroSum {
  double integral;
  double scale;  // max |signed_density| over the range
};

// \int_0^{upper} signed_density d nu_bar for sigma0 = sigma1 = 1.
ZeroSum signed_zero_sum(int N, double upper = 40.0);

}  // namespace chisq
