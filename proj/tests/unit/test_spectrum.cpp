#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "chisq/error.hpp"
#include "chisq/spectrum.hpp"

using namespace chisq;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson rule; an independent route for the frozen values below.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
  return s * h / 3;
}

void expect_code(const std::function<void()>& fn, const std::string& code) {
  try {
    fn();
    ADD_FAILURE() << "expected " << code;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code);
  }
}

}  // namespace

TEST(Moment, TopHatOracle) {
  const auto s = PowerSpectrum::top_hat(1, 1);
  const double m0 = simpson([](double k) { return 4 * kPi * k * k; }, 0, 1);
  const double m1 = simpson([](double k) { return 4 * kPi * k * k * k * k; }, 0, 1);
  EXPECT_NEAR(m0, 4.18879020478639, 1e-12);
  EXPECT_NEAR(m1, 2.51327412287183, 1e-12);
  EXPECT_NEAR(moment(s, 0), 4.18879020478639, 1e-12);
  EXPECT_NEAR(moment(s, 1), 2.51327412287183, 1e-12);
}

TEST(Moment, NarrowShellGivesPowersOfK0) {
  const double k0 = 1.7;
  const auto raw = PowerSpectrum::gaussian_shell(1, k0, 1e-4 * k0);
  const auto unit = raw.scaled(1 / moment(raw, 0));
  EXPECT_NEAR(moment(unit, 0), 1.0, 1e-12);
  EXPECT_NEAR(moment(unit, 1), k0 * k0, 1e-6 * k0 * k0);
  EXPECT_NEAR(moment(unit, 2), std::pow(k0, 4), 1e-6 * std::pow(k0, 4));
}

TEST(Moment, AnalyticFamiliesMatchQuadrature) {
  const std::vector<PowerSpectrum> spectra = {
      PowerSpectrum::top_hat(2.5, 0.7),          PowerSpectrum::power_law(1.0, 2.0, 0.4),
      PowerSpectrum::power_law(3.0, 0.5, 1.3),   PowerSpectrum::power_law(1.0, -1.0, 2.0),
      PowerSpectrum::gaussian_shell(1, 2.0, 0.3), PowerSpectrum::gaussian_shell(4, 0.5, 0.4),
  };
  for (const auto& s : spectra)
    for (int n = 0; n <= 2; ++n) {
      const double exact = moment(s, n);
      EXPECT_NEAR(moment_by_quadrature(s, n), exact, 1e-10 * exact) << s.describe() << " n=" << n;
    }
}

TEST(Moment, PowerLawDivergesAtSmallK) {
  const auto s = PowerSpectrum::power_law(1.0, -3.0, 1.0);
  expect_code([&] { moment(s, 0); }, "divergent-integral");
  expect_code([&] { moment_by_quadrature(s, 0); }, "divergent-integral");
  EXPECT_GT(moment(s, 1), 0);
  expect_code([&] { spectral_params(s); }, "divergent-integral");
}

TEST(Moment, TabulatedMatchesExactAntiderivative) {
  const std::vector<double> k = {0.1, 0.3, 0.8, 1.5, 2.2};
  const std::vector<double> p = {0.0, 2.0, 1.0, 0.5, 0.0};
  const auto s = PowerSpectrum::tabulated(k, p);
  // Per segment P = p_i + c ln(k/k_i); \int k^m ln k = k^{m+1} (ln k/(m+1) - 1/(m+1)^2).
  for (int n = 0; n <= 2; ++n) {
    const int m = 2 * n + 2;
    auto F_log = [m](double x) { return std::pow(x, m + 1) * (std::log(x) / (m + 1) - 1.0 / ((m + 1) * (m + 1))); };
    auto F_pow = [m](double x) { return std::pow(x, m + 1) / (m + 1); };
    double exact = 0;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      const double c = (p[i + 1] - p[i]) / std::log(k[i + 1] / k[i]);
      const double a = p[i] - c * std::log(k[i]);
      exact += a * (F_pow(k[i + 1]) - F_pow(k[i])) + c * (F_log(k[i + 1]) - F_log(k[i]));
    }
    exact *= 4 * kPi;
    EXPECT_NEAR(moment(s, n), exact, 1e-11 * exact) << "n=" << n;
  }
  EXPECT_EQ(s(0.05), 0.0);
  EXPECT_EQ(s(3.0), 0.0);
  EXPECT_NEAR(s(std::sqrt(0.1 * 0.3)), 1.0, 1e-14);  // log midpoint
}

TEST(SpectralParams, TopHatGamma) {
  const auto m = spectral_params(PowerSpectrum::top_hat(1, 1));
  EXPECT_NEAR(m.gamma, std::sqrt(21.0) / 5, 1e-13);
  EXPECT_NEAR(m.gamma, 0.916515138991168, 1e-13);
  EXPECT_FALSE(m.degenerate);
}

TEST(SpectralParams, NarrowShellIsDegenerate) {
  const auto m = spectral_params(PowerSpectrum::gaussian_shell(1, 1.0, 1e-6));
  EXPECT_TRUE(m.degenerate);
  EXPECT_LE(m.gamma, 1.0);
  EXPECT_FALSE(spectral_params(PowerSpectrum::gaussian_shell(1, 1.0, 0.05)).degenerate);
}

TEST(SpectralParams, ScaleInvariance) {
  const std::vector<PowerSpectrum> spectra = {PowerSpectrum::top_hat(1, 1), PowerSpectrum::power_law(1, 2, 0.3),
                                              PowerSpectrum::gaussian_shell(1, 2, 0.5),
                                              PowerSpectrum::tabulated({0.1, 1, 2}, {1, 3, 0.2})};
  for (const auto& s : spectra)
    for (double c : {1e-3, 0.5, 7.0, 1e4}) {
      const auto a = spectral_params(s);
      const auto b = spectral_params(s.scaled(c));
      EXPECT_NEAR(b.gamma, a.gamma, 1e-12);
      EXPECT_NEAR(b.sigma0, std::sqrt(c) * a.sigma0, 1e-12 * b.sigma0);
      EXPECT_NEAR(b.sigma1, std::sqrt(c) * a.sigma1, 1e-12 * b.sigma1);
      EXPECT_NEAR(b.sigma2, std::sqrt(c) * a.sigma2, 1e-12 * b.sigma2);
    }
}

TEST(SpectralParams, CauchySchwarzBound) {
  for (double w : {0.01, 0.1, 0.5, 2.0})
    EXPECT_LE(spectral_params(PowerSpectrum::gaussian_shell(1, 1, w)).gamma, 1 + 1e-12);
  for (double ns : {-1.0, 0.0, 1.0, 2.0, 6.0})
    EXPECT_LE(spectral_params(PowerSpectrum::power_law(1, ns, 1)).gamma, 1 + 1e-12);
  for (double kmax : {0.1, 1.0, 10.0}) EXPECT_LE(spectral_params(PowerSpectrum::top_hat(1, kmax)).gamma, 1 + 1e-12);
}

TEST(SpectralParams, PowerLawClosedForm) {
  // n_s = 2: sigma_n^2 = 2 pi k_c^{2n+5} Gamma((2n+5)/2), so gamma = Gamma(7/2)/sqrt(Gamma(5/2)Gamma(9/2)).
  const auto m = spectral_params(PowerSpectrum::power_law(1, 2, 0.5));
  EXPECT_NEAR(m.gamma, 2.5 / std::sqrt(8.75), 1e-13);
  EXPECT_NEAR(m.sigma1 / m.sigma0, 0.5 * std::sqrt(2.5), 1e-13);
}

TEST(PowerSpectrum, Validation) {
  expect_code([] { PowerSpectrum::top_hat(0, 1); }, "invalid-spectrum");
  expect_code([] { PowerSpectrum::tabulated({1, 2}, {0, 0}); }, "invalid-spectrum");
  expect_code([] { PowerSpectrum::tabulated({1, 1}, {1, 1}); }, "invalid-spectrum");
  expect_code([] { PowerSpectrum::tabulated({1, 2}, {1, -1}); }, "invalid-spectrum");
  std::istringstream empty("# nothing here\n\n");
  expect_code([&] { PowerSpectrum::read_table(empty); }, "invalid-spectrum");
  std::istringstream bad("1 2 3\n");
  expect_code([&] { PowerSpectrum::read_table(bad); }, "invalid-spectrum");
}

TEST(PowerSpectrum, ReadsTableWithComments) {
  std::istringstream in("# k P\n0.5 1.0  # first\n1.0 2.0\n\n2.0 0.5\n");
  const auto s = PowerSpectrum::read_table(in);
  const auto& t = std::get<Tabulated>(s.family());
  ASSERT_EQ(t.k.size(), 3u);
  EXPECT_EQ(t.p[1], 2.0);
  EXPECT_EQ(s(1.0), 2.0);
}
