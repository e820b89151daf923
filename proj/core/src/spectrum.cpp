#include "chisq/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "chisq/error.hpp"

namespace chisq {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) fail_validation("invalid-spectrum", what);
}

void validate(const PowerSpectrum::Family& f) {
  std::visit(overloaded{
                 [](const TopHat& s) {
                   require(s.amplitude > 0 && std::isfinite(s.amplitude), "top-hat amplitude must be positive");
                   require(s.k_max > 0 && std::isfinite(s.k_max), "top-hat k_max must be positive");
                 },
                 [](const PowerLawGaussianCutoff& s) {
                   require(s.amplitude > 0 && std::isfinite(s.amplitude), "power-law amplitude must be positive");
                   require(std::isfinite(s.n_s), "power-law index must be finite");
                   require(s.k_cut > 0 && std::isfinite(s.k_cut), "power-law k_cut must be positive");
                 },
                 [](const GaussianShell& s) {
                   require(s.amplitude > 0 && std::isfinite(s.amplitude), "shell amplitude must be positive");
                   require(s.k0 > 0 && std::isfinite(s.k0), "shell k0 must be positive");
                   require(s.width > 0 && std::isfinite(s.width), "shell width must be positive");
                 },
                 [](const Tabulated& s) {
                   require(s.k.size() == s.p.size(), "table columns differ in length");
                   require(s.k.size() >= 2, "table needs at least two rows");
                   bool any_positive = false;
                   for (std::size_t i = 0; i < s.k.size(); ++i) {
                     require(s.k[i] > 0 && std::isfinite(s.k[i]), "table k must be positive");
                     require(i == 0 || s.k[i] > s.k[i - 1], "table k must be strictly increasing");
                     require(s.p[i] >= 0 && std::isfinite(s.p[i]), "table P must be non-negative");
                     any_positive = any_positive || s.p[i] > 0;
                   }
                   require(any_positive, "table P is identically zero");
                 },
             },
             f);
}

// \int_0^\infty k^m exp(-(k-k0)^2/(2w^2)) dk via truncated Gaussian moments
// J_j = \int_c^\infty t^j e^{-t^2/2} dt, c = -k0/w.
double shell_raw_moment(double k0, double w, int m) {
  const double c = -k0 / w;
  const double g = std::exp(-0.5 * c * c);
  std::vector<double> J(m + 1);
  J[0] = std::sqrt(kPi / 2) * std::erfc(c / std::sqrt(2.0));
  if (m >= 1) J[1] = g;
  for (int j = 2; j <= m; ++j) J[j] = std::pow(c, j - 1) * g + (j - 1) * J[j - 2];
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    sum += binom * std::pow(k0, m - j) * std::pow(w, j) * J[j];
    binom = binom * (m - j) / (j + 1);
  }
  return w * sum;
}

double table_value(const Tabulated& t, double k) {
  if (!(k >= t.k.front() && k <= t.k.back())) return 0.0;
  auto it = std::upper_bound(t.k.begin(), t.k.end(), k);
  if (it == t.k.end()) return t.p.back();
  const std::size_t i = static_cast<std::size_t>(it - t.k.begin()) - 1;
  const double s = std::log(k / t.k[i]) / std::log(t.k[i + 1] / t.k[i]);
  return t.p[i] + s * (t.p[i + 1] - t.p[i]);
}

}  // namespace

PowerSpectrum::PowerSpectrum(Family family) : family_(std::move(family)) { validate(family_); }

PowerSpectrum PowerSpectrum::top_hat(double amplitude, double k_max) {
  return PowerSpectrum(TopHat{amplitude, k_max});
}

PowerSpectrum PowerSpectrum::power_law(double amplitude, double n_s, double k_cut) {
  return PowerSpectrum(PowerLawGaussianCutoff{amplitude, n_s, k_cut});
}

PowerSpectrum PowerSpectrum::gaussian_shell(double amplitude, double k0, double width) {
  return PowerSpectrum(GaussianShell{amplitude, k0, width});
}

PowerSpectrum PowerSpectrum::tabulated(std::vector<double> k, std::vector<double> p) {
  return PowerSpectrum(Tabulated{std::move(k), std::move(p)});
}

PowerSpectrum PowerSpectrum::read_table(std::istream& in) {
  std::vector<double> k, p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double kv, pv;
    if (!(ls >> kv)) continue;
    std::string extra;
    if (!(ls >> pv) || (ls >> extra))
      fail_validation("invalid-spectrum", "table line " + std::to_string(lineno) + " must have two columns");
    k.push_back(kv);
    p.push_back(pv);
  }
  if (k.empty()) fail_validation("invalid-spectrum", "table is empty");
  return tabulated(std::move(k), std::move(p));
}

PowerSpectrum PowerSpectrum::read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_validation("invalid-spectrum", "cannot open table " + path);
  return read_table(in);
}

double PowerSpectrum::operator()(double k) const {
  if (!(k > 0)) return 0.0;
  return std::visit(overloaded{
                        [k](const TopHat& s) { return k <= s.k_max ? s.amplitude : 0.0; },
                        [k](const PowerLawGaussianCutoff& s) {
                          const double x = k / s.k_cut;
                          return s.amplitude * std::pow(k, s.n_s) * std::exp(-x * x);
                        },
                        [k](const GaussianShell& s) {
                          const double x = (k - s.k0) / s.width;
                          return s.amplitude * std::exp(-0.5 * x * x);
                        },
                        [k](const Tabulated& s) { return table_value(s, k); },
                    },
                    family_);
}

PowerSpectrum PowerSpectrum::scaled(double c) const {
  if (!(c > 0)) fail_validation("invalid-spectrum", "scale factor must be positive");
  Family f = family_;
  std::visit(overloaded{
                 [c](TopHat& s) { s.amplitude *= c; },
                 [c](PowerLawGaussianCutoff& s) { s.amplitude *= c; },
                 [c](GaussianShell& s) { s.amplitude *= c; },
                 [c](Tabulated& s) {
                   for (auto& v : s.p) v *= c;
                 },
             },
             f);
  return PowerSpectrum(std::move(f));
}

std::pair<double, double> PowerSpectrum::support() const {
  return std::visit(overloaded{
                        [](const TopHat& s) { return std::pair{0.0, s.k_max}; },
                        // exp(-x^2) < 1e-300 beyond x ~ 26.3; the power law cannot rescue it.
                        [](const PowerLawGaussianCutoff& s) {
                          return std::pair{0.0, s.k_cut * (27.0 + std::max(0.0, s.n_s))};
                        },
                        [](const GaussianShell& s) {
                          return std::pair{std::max(0.0, s.k0 - 38.0 * s.width), s.k0 + 38.0 * s.width};
                        },
                        [](const Tabulated& s) { return std::pair{s.k.front(), s.k.back()}; },
                    },
                    family_);
}

std::string PowerSpectrum::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const TopHat& s) { os << "tophat:" << s.amplitude << ',' << s.k_max; },
                 [&](const PowerLawGaussianCutoff& s) {
                   os << "powerlaw:" << s.amplitude << ',' << s.n_s << ',' << s.k_cut;
                 },
                 [&](const GaussianShell& s) { os << "shell:" << s.amplitude << ',' << s.k0 << ',' << s.width; },
                 [&](const Tabulated& s) { os << "table:" << s.k.size() << " rows"; },
             },
             family_);
  return os.str();
}

double moment(const PowerSpectrum& spectrum, int n, const QuadratureConfig& quad) {
  if (n < 0 || n > 2) fail_validation("range", "moment order must be 0, 1 or 2");
  const int m = 2 * n + 2;
  return std::visit(overloaded{
                        [&](const TopHat& s) {
                          return 4 * kPi * s.amplitude * std::pow(s.k_max, m + 1) / (m + 1);
                        },
                        [&](const PowerLawGaussianCutoff& s) {
                          const double p = m + 1 + s.n_s;
                          if (!(p > 0))
                            fail_numerical("divergent-integral", "power-law moment " + std::to_string(n) +
                                                                     " diverges at small k");
                          return 2 * kPi * s.amplitude * std::pow(s.k_cut, p) * std::tgamma(p / 2);
                        },
                        [&](const GaussianShell& s) {
                          return 4 * kPi * s.amplitude * shell_raw_moment(s.k0, s.width, m);
                        },
                        [&](const Tabulated&) { return moment_by_quadrature(spectrum, n, quad); },
                    },
                    spectrum.family());
}

double moment_by_quadrature(const PowerSpectrum& spectrum, int n, const QuadratureConfig& quad) {
  if (n < 0 || n > 2) fail_validation("range", "moment order must be 0, 1 or 2");
  const int m = 2 * n + 2;
  auto f = [&](double k) { return 4 * kPi * std::pow(k, m) * spectrum(k); };
  return std::visit(overloaded{
                        [&](const TopHat& s) { return integrate(f, 0.0, s.k_max, quad).value; },
                        [&](const PowerLawGaussianCutoff& s) {
                          if (!(m + 1 + s.n_s > 0))
                            fail_numerical("divergent-integral", "power-law moment " + std::to_string(n) +
                                                                     " diverges at small k");
                          return integrate(f, 0.0, s.k_cut, quad).value +
                                 integrate(f, s.k_cut, INFINITY, quad).value;
                        },
                        [&](const GaussianShell& s) {
                          const auto [lo, hi] = spectrum.support();
                          return integrate(f, lo, s.k0, quad).value + integrate(f, s.k0, hi, quad).value;
                        },
                        [&](const Tabulated& s) {
                          double sum = 0.0;
                          for (std::size_t i = 0; i + 1 < s.k.size(); ++i)
                            sum += integrate(f, s.k[i], s.k[i + 1], quad).value;
                          return sum;
                        },
                    },
                    spectrum.family());
}

SpectralMoments spectral_params(const PowerSpectrum& spectrum, const QuadratureConfig& quad) {
  const double s0 = moment(spectrum, 0, quad);
  const double s1 = moment(spectrum, 1, quad);
  const double s2 = moment(spectrum, 2, quad);
  if (!(s0 > 0 && s1 > 0 && s2 > 0)) fail_numerical("divergent-integral", "non-positive spectral moment");
  SpectralMoments out{};
  out.sigma0 = std::sqrt(s0);
  out.sigma1 = std::sqrt(s1);
  out.sigma2 = std::sqrt(s2);
  out.gamma = s1 / (out.sigma0 * out.sigma2);
  if (out.gamma > 1.0 + 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma = " << out.gamma << " exceeds 1; inconsistent moments";
    fail_numerical("gamma-out-of-range", os.str());
  }
  if (out.gamma >= 1.0 - 1e-9) {
    out.gamma = std::min(out.gamma, 1.0);
    out.degenerate = true;
  }
  return out;
}

}  // namespace chisq
