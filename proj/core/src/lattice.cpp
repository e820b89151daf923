#include <cmath>
#include <numbers>
#include <sstream>

#include "chisq/error.hpp"
#include "chisq/oracle.hpp"
#include "chisq/parallel.hpp"
#include "fft.hpp"

namespace chisq {

namespace {

constexpr double kPi = std::numbers::pi;

// Fraction of sigma_1^2 carried by wavenumbers above k.
double gradient_tail_fraction(const PowerSpectrum& spectrum, double k) {
  const auto [lo, hi] = spectrum.support();
  if (k >= hi) return 0.0;
  QuadratureConfig q;
  q.rel_tol = 1e-8;
  auto f = [&](double x) { return x * x * x * x * spectrum(x); };
  const double total = moment(spectrum, 1) / (4 * kPi);
  const double tail = integrate(f, std::max(k, lo), hi, q).value;
  return tail / total;
}

}  // namespace

void check_resolution(const PowerSpectrum& spectrum, const LatticeSpec& grid) {
  if (grid.n < 8 || grid.n % 2 != 0) fail_validation("grid-too-small", "lattice size must be even and at least 8");
  if (!(grid.box_length > 0)) fail_validation("range", "box length must be positive");
  const double h = grid.box_length / static_cast<double>(grid.n);
  const double k_nyquist = kPi / h;
  // Phi = sum phi^2 doubles the band, so the fields must be quiet above k_nyquist / 2.
  const double tail = gradient_tail_fraction(spectrum, 0.5 * k_nyquist);
  if (tail > 1e-3) {
    std::ostringstream os;
    os << "fraction " << tail << " of sigma1^2 lies above half the Nyquist wavenumber " << 0.5 * k_nyquist;
    fail_validation("under-resolved-spectrum", os.str());
  }
  const auto m = spectral_params(spectrum);
  const double length = 2 * kPi * m.sigma0 / m.sigma1;
  if (length < 8 * h) {
    std::ostringstream os;
    os << "correlation length 2 pi sigma0/sigma1 = " << length << " spans fewer than 8 lattice spacings";
    fail_validation("grid-too-small", os.str());
  }
  if (length > grid.box_length / 2) fail_validation("grid-too-small", "correlation length exceeds half the box");
}

std::vector<FieldLattice> synthesize_fields(const std::function<double(double)>& power, int N,
                                            const LatticeSpec& grid, std::uint64_t seed) {
  if (N < 1) fail_validation("range", "need at least one field");
  if (grid.n < 2 || grid.n % 2 != 0) fail_validation("grid-too-small", "lattice size must be even");
  const std::size_t n = grid.n;
  const detail::RealFft3 fft(n);
  const double dk = 2 * kPi / grid.box_length;
  const double k_nyquist = kPi * static_cast<double>(n) / grid.box_length;
  const double n3 = static_cast<double>(fft.real_size());
  const std::size_t nz = n / 2 + 1;

  // Amplitude per half-complex mode.
  std::vector<double> amp(fft.complex_size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < nz; ++l) {
        const double kx = dk * fft.wave(i), ky = dk * fft.wave(j), kz = dk * static_cast<double>(l);
        const double k = std::sqrt(kx * kx + ky * ky + kz * kz);
        const double p = (k > 0 && k <= k_nyquist) ? power(k) : 0.0;
        amp[(i * n + j) * nz + l] = std::sqrt(std::max(p, 0.0) * dk * dk * dk / n3);
      }

  std::vector<FieldLattice> out(N);
  auto real = detail::fftw_alloc<double>(fft.real_size());
  auto spec = detail::fftw_alloc<fftw_complex>(fft.complex_size());
  for (int a = 0; a < N; ++a) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(a)));
    for (std::size_t x = 0; x < fft.real_size(); ++x) real[x] = standard_normal(rng);
    fft.forward(real.get(), spec.get());
    for (std::size_t m = 0; m < fft.complex_size(); ++m) {
      spec[m][0] *= amp[m];
      spec[m][1] *= amp[m];
    }
    fft.backward(spec.get(), real.get());
    out[a].n = n;
    out[a].box_length = grid.box_length;
    out[a].values.assign(real.get(), real.get() + fft.real_size());
  }
  return out;
}

std::vector<FieldLattice> synthesize_fields(const PowerSpectrum& spectrum, int N, const LatticeSpec& grid,
                                            std::uint64_t seed) {
  check_resolution(spectrum, grid);
  return synthesize_fields([&spectrum](double k) { return spectrum(k); }, N, grid, seed);
}

FieldLattice chi2_lattice(const std::vector<FieldLattice>& fields) {
  if (fields.empty()) fail_validation("grid-mismatch", "no fields supplied");
  FieldLattice phi;
  phi.n = fields[0].n;
  phi.box_length = fields[0].box_length;
  phi.values.assign(fields[0].values.size(), 0.0);
  for (const auto& f : fields) {
    if (f.n != phi.n || f.box_length != phi.box_length || f.values.size() != phi.values.size())
      fail_validation("grid-mismatch", "fields live on different lattices");
    for (std::size_t i = 0; i < f.values.size(); ++i) phi.values[i] += f.values[i] * f.values[i];
  }
  return phi;
}

LatticeMoments measure_moments(const std::vector<FieldLattice>& fields, DerivativeScheme scheme) {
  if (fields.empty()) fail_validation("range", "no fields supplied");
  double s0 = 0, s1 = 0, s2 = 0;
  for (const auto& f : fields) {
    const std::size_t n = f.n;
    const double n3 = static_cast<double>(n * n * n);
    if (scheme == DerivativeScheme::spectral) {
      // Parseval on the unnormalized transform: mean(g^2) = sum |G_k|^2 / n^6.
      const detail::RealFft3 fft(n);
      auto real = detail::fftw_alloc<double>(fft.real_size());
      auto spec = detail::fftw_alloc<fftw_complex>(fft.complex_size());
      std::copy(f.values.begin(), f.values.end(), real.get());
      fft.forward(real.get(), spec.get());
      const double dk = 2 * kPi / f.box_length;
      const std::size_t nz = n / 2 + 1;
      double a0 = 0, a1 = 0, a2 = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t l = 0; l < nz; ++l) {
            const auto& c = spec[(i * n + j) * nz + l];
            const double w = (l == 0 || l == n / 2) ? 1.0 : 2.0;
            const double p = w * (c[0] * c[0] + c[1] * c[1]);
            const double kx = dk * fft.wave(i), ky = dk * fft.wave(j), kz = dk * static_cast<double>(l);
            const double k2 = kx * kx + ky * ky + kz * kz;
            a0 += p;
            a1 += p * k2;
            a2 += p * k2 * k2;
          }
      s0 += a0 / (n3 * n3);
      s1 += a1 / (n3 * n3);
      s2 += a2 / (n3 * n3);
    } else {
      const double h = f.spacing();
      auto at = [&](long i, long j, long k) {
        const long m = static_cast<long>(n);
        return f.values[f.index((i + m) % m, (j + m) % m, (k + m) % m)];
      };
      double a0 = 0, a1 = 0, a2 = 0;
      const long m = static_cast<long>(n);
      for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j)
          for (long k = 0; k < m; ++k) {
            const double c = at(i, j, k);
            const double gx = (at(i + 1, j, k) - at(i - 1, j, k)) / (2 * h);
            const double gy = (at(i, j + 1, k) - at(i, j - 1, k)) / (2 * h);
            const double gz = (at(i, j, k + 1) - at(i, j, k - 1)) / (2 * h);
            const double lap = (at(i + 1, j, k) + at(i - 1, j, k) + at(i, j + 1, k) + at(i, j - 1, k) +
                                at(i, j, k + 1) + at(i, j, k - 1) - 6 * c) /
                               (h * h);
            a0 += c * c;
            a1 += gx * gx + gy * gy + gz * gz;
            a2 += lap * lap;
          }
      s0 += a0 / n3;
      s1 += a1 / n3;
      s2 += a2 / n3;
    }
  }
  const double nf = static_cast<double>(fields.size());
  LatticeMoments m;
  m.sigma0_sq = s0 / nf;
  m.sigma1_sq = s1 / nf;
  m.sigma2_sq = s2 / nf;
  m.gradient_component_var = m.sigma1_sq / 3;
  m.gamma = m.sigma1_sq / std::sqrt(m.sigma0_sq * m.sigma2_sq);
  return m;
}

}  // namespace chisq
