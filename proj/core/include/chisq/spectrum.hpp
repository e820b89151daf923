#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chisq/quadrature.hpp"

namespace chisq {

// P(k) = A for k <= k_max, else 0.
struct TopHat {
  double amplitude;
  double k_max;
};

// P(k) = A k^n_s exp(-k^2 / k_cut^2).
struct PowerLawGaussianCutoff {
  double amplitude;
  double n_s;
  double k_cut;
};

// P(k) = A exp(-(k - k_0)^2 / (2 width^2)) for k > 0.
struct GaussianShell {
  double amplitude;
  double k0;
  double width;
};

// Piecewise linear in ln k between the nodes, zero outside [k.front(), k.back()].
struct Tabulated {
  std::vector<double> k;
  std::vector<double> p;
};

class PowerSpectrum {
 public:
  using Family = std::variant<TopHat, PowerLawGaussianCutoff, GaussianShell, Tabulated>;

  explicit PowerSpectrum(Family family);

  static PowerSpectrum top_hat(double amplitude, double k_max);
  static PowerSpectrum power_law(double amplitude, double n_s, double k_cut);
  static PowerSpectrum gaussian_shell(double amplitude, double k0, double width);
  static PowerSpectrum tabulated(std::vector<double> k, std::vector<double> p);

  // Two whitespace-separated columns (k, P); '#' starts a comment.
  static PowerSpectrum read_table(std::istream& in);
  static PowerSpectrum read_table_file(const std::string& path);

  double operator()(double k) const;
  PowerSpectrum scaled(double c) const;

  // Interval outside which P vanishes or is negligible (below 1e-300 of peak).
  std::pair<double, double> support() const;
  std::string describe() const;
  const Family& family() const { return family_; }

 private:
  Family family_;
};

struct SpectralMoments {
  double sigma0;
  double sigma1;
  double sigma2;
  double gamma;
  bool degenerate;  // gamma within 1e-9 of 1
};

// sigma_n^2 = 4 pi \int_0^\infty dk k^{2n+2} P(k). Closed forms for the
// analytic families, adaptive quadrature for tables.
double moment(const PowerSpectrum& spectrum, int n, const QuadratureConfig& quad = {});

// Same integral by adaptive quadrature for every family.
double moment_by_quadrature(const PowerSpectrum& spectrum, int n, const QuadratureConfig& quad = {});

SpectralMoments spectral_params(const PowerSpectrum& spectrum, const QuadratureConfig& quad = {});

}  // namespace chisq
