#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chisq/error.hpp"
#include "chisq/oracle.hpp"
#include "fft.hpp"

namespace chisq {

namespace {

constexpr double kPi = std::numbers::pi;

// Derivative selector: which axes are differentiated, as (a, b); -1 for none.
struct Deriv {
  int a, b;
};

}  // namespace

std::array<std::size_t, 4> PeakCatalog::counts() const {
  std::array<std::size_t, 4> c{};
  for (const auto& e : entries) ++c[static_cast<std::size_t>(e.cls)];
  return c;
}

long PeakCatalog::signed_count() const {
  long s = 0;
  for (const auto& e : entries) s += signed_weight(e.cls);
  return s;
}

PeakCatalog count_stationary(const FieldLattice& phi, double sigma0) {
  if (!(sigma0 > 0)) fail_validation("range", "sigma0 must be positive");
  const std::size_t n = phi.n;
  if (n < 4 || n % 2 != 0 || phi.values.size() != n * n * n)
    fail_validation("grid-mismatch", "field is not an even n^3 lattice");

  const auto [lo, hi] = std::minmax_element(phi.values.begin(), phi.values.end());
  if (*hi - *lo <= 1e-14 * std::max(1.0, std::abs(*hi)))
    fail_numerical("non-smooth-field", "field is constant, every point is a degenerate stationary point");

  const detail::RealFft3 fft(n);
  const std::size_t nz = n / 2 + 1;
  const std::size_t nr = fft.real_size();
  const std::size_t nc = fft.complex_size();
  const double dk = 2 * kPi / phi.box_length;
  const double k_nyquist = kPi * static_cast<double>(n) / phi.box_length;
  const long half = static_cast<long>(n / 2);

  auto scratch_r = detail::fftw_alloc<double>(nr);
  auto spec = detail::fftw_alloc<fftw_complex>(nc);
  auto scratch_c = detail::fftw_alloc<fftw_complex>(nc);
  std::copy(phi.values.begin(), phi.values.end(), scratch_r.get());
  fft.forward(scratch_r.get(), spec.get());

  // Smoothness: gradient power near the Nyquist corner must be negligible.
  {
    double total = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < nz; ++l) {
          if (i == 0 && j == 0 && l == 0) continue;
          const auto& c = spec[(i * n + j) * nz + l];
          const double kx = dk * fft.wave(i), ky = dk * fft.wave(j), kz = dk * static_cast<double>(l);
          const double p = (l == 0 || l == n / 2 ? 1.0 : 2.0) * (c[0] * c[0] + c[1] * c[1]) *
                           (kx * kx + ky * ky + kz * kz);
          total += p;
          if (std::max({std::abs(kx), std::abs(ky), std::abs(kz)}) > 0.75 * k_nyquist) edge += p;
        }
    if (total > 0 && edge > 1e-4 * total) {
      std::ostringstream os;
      os << "fraction " << edge / total << " of the gradient power sits near the Nyquist wavenumber";
      fail_numerical("non-smooth-field", os.str());
    }
  }

  const Deriv derivs[9] = {{0, -1}, {1, -1}, {2, -1}, {0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
  std::vector<std::vector<double>> d(9);
  for (int q = 0; q < 9; ++q) {
    const Deriv dv = derivs[q];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < nz; ++l) {
          const long w[3] = {fft.wave(i), fft.wave(j), static_cast<long>(l)};
          const std::size_t m = (i * n + j) * nz + l;
          double re = spec[m][0], im = spec[m][1];
          double out_re, out_im;
          if (dv.b < 0) {
            // i k_a; the Nyquist mode has no odd derivative.
            const double k = w[dv.a] == half ? 0.0 : dk * static_cast<double>(w[dv.a]);
            out_re = -im * k;
            out_im = re * k;
          } else if (dv.a == dv.b) {
            const double k = dk * static_cast<double>(w[dv.a]);
            out_re = -re * k * k;
            out_im = -im * k * k;
          } else {
            const double ka = w[dv.a] == half ? 0.0 : dk * static_cast<double>(w[dv.a]);
            const double kb = w[dv.b] == half ? 0.0 : dk * static_cast<double>(w[dv.b]);
            out_re = -re * ka * kb;
            out_im = -im * ka * kb;
          }
          scratch_c[m][0] = out_re;
          scratch_c[m][1] = out_im;
        }
    fft.backward(scratch_c.get(), scratch_r.get());
    d[q].resize(nr);
    const double inv = 1.0 / static_cast<double>(nr);
    for (std::size_t x = 0; x < nr; ++x) d[q][x] = scratch_r[x] * inv;
  }

  PeakCatalog cat;
  cat.volume = phi.volume();
  cat.realizations = 1;
  const double h = phi.spacing();
  const long m = static_cast<long>(n);
  auto at = [&](long i, long j, long k) { return phi.index((i + m) % m, (j + m) % m, (k + m) % m); };

  // Rounding noise on a gradient that vanishes exactly at a lattice point.
  double slack[3];
  for (int q = 0; q < 3; ++q) {
    double top = 0.0;
    for (double v : d[q]) top = std::max(top, std::abs(v));
    slack[q] = 1e-10 * top;
  }

  // One root search per cell [0, 1)^3 on the trilinear interpolant of the
  // spectral gradient. The interpolant is a convex combination of the corner
  // values, so a component that keeps one sign on all eight corners rules the
  // cell out.
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j)
      for (long k = 0; k < m; ++k) {
        std::size_t corner[8];
        for (int c = 0; c < 8; ++c) corner[c] = at(i + (c >> 2), j + ((c >> 1) & 1), k + (c & 1));
        bool possible = true;
        for (int q = 0; q < 3 && possible; ++q) {
          double lo = INFINITY, hi = -INFINITY;
          for (std::size_t c : corner) {
            lo = std::min(lo, d[q][c]);
            hi = std::max(hi, d[q][c]);
          }
          possible = lo <= slack[q] && hi >= -slack[q];
        }
        if (!possible) continue;

        auto interp = [&](const double u[3], double out[9]) {
          for (int q = 0; q < 9; ++q) out[q] = 0.0;
          for (int c = 0; c < 8; ++c) {
            const double w = ((c >> 2) ? u[0] : 1 - u[0]) * (((c >> 1) & 1) ? u[1] : 1 - u[1]) *
                             ((c & 1) ? u[2] : 1 - u[2]);
            for (int q = 0; q < 9; ++q) out[q] += w * d[q][corner[c]];
          }
        };
        double u[3] = {0.5, 0.5, 0.5};
        double v[9];
        bool converged = false;
        for (int it = 0; it < 30 && !converged; ++it) {
          interp(u, v);
          const Matrix3 H = {{{v[3], v[6], v[7]}, {v[6], v[4], v[8]}, {v[7], v[8], v[5]}}};
          const double det = det3(H);
          if (det == 0.0 || !std::isfinite(det)) break;
          const double c00 = H[1][1] * H[2][2] - H[1][2] * H[1][2];
          const double c01 = H[0][2] * H[1][2] - H[0][1] * H[2][2];
          const double c02 = H[0][1] * H[1][2] - H[0][2] * H[1][1];
          const double c11 = H[0][0] * H[2][2] - H[0][2] * H[0][2];
          const double c12 = H[0][1] * H[0][2] - H[0][0] * H[1][2];
          const double c22 = H[0][0] * H[1][1] - H[0][1] * H[0][1];
          const double step[3] = {-(c00 * v[0] + c01 * v[1] + c02 * v[2]) / det / h,
                                  -(c01 * v[0] + c11 * v[1] + c12 * v[2]) / det / h,
                                  -(c02 * v[0] + c12 * v[1] + c22 * v[2]) / det / h};
          double size = 0.0;
          for (int a = 0; a < 3; ++a) {
            u[a] = std::clamp(u[a] + step[a], -0.5, 1.5);
            size = std::max(size, std::abs(step[a]));
          }
          converged = size < 1e-10;
        }
        if (!converged) continue;
        // Ownership window shifted by a hair so that a root sitting on a
        // lattice plane goes to exactly one of the two cells sharing it.
        constexpr double kEdge = 1e-7;
        bool inside = true;
        for (double x : u) inside = inside && x >= -kEdge && x < 1 - kEdge;
        if (!inside) continue;

        interp(u, v);
        // classify() measures its tolerance against 1 + |H|, so bring H to unit scale first.
        double scale = 0.0;
        for (int q = 3; q < 9; ++q) scale = std::max(scale, std::abs(v[q]));
        if (!(scale > 0)) {
          ++cat.n_degenerate;
          continue;
        }
        for (int q = 3; q < 9; ++q) v[q] /= scale;
        const Matrix3 H = {{{v[3], v[6], v[7]}, {v[6], v[4], v[8]}, {v[7], v[8], v[5]}}};
        const auto cls = classify(H);
        if (!cls) {
          ++cat.n_degenerate;
          continue;
        }
        // Height from the second-order expansion about the nearest corner.
        const int near = (u[0] >= 0.5 ? 4 : 0) | (u[1] >= 0.5 ? 2 : 0) | (u[2] >= 0.5 ? 1 : 0);
        const std::size_t c = corner[near];
        const double dx[3] = {h * (u[0] - (near >> 2)), h * (u[1] - ((near >> 1) & 1)), h * (u[2] - (near & 1))};
        const Matrix3 Hc = {{{d[3][c], d[6][c], d[7][c]}, {d[6][c], d[4][c], d[8][c]}, {d[7][c], d[8][c], d[5][c]}}};
        double value = phi.values[c];
        for (int a = 0; a < 3; ++a) {
          value += d[a][c] * dx[a];
          for (int b = 0; b < 3; ++b) value += 0.5 * dx[a] * Hc[a][b] * dx[b];
        }
        cat.entries.push_back({0, phi.index(i, j, k), *cls, std::sqrt(std::max(value, 0.0)) / sigma0});
      }

  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j)
      for (long k = 0; k < m; ++k) {
        const double c = phi.values[phi.index(i, j, k)];
        bool top = true;
        for (long a = -1; a <= 1 && top; ++a)
          for (long b = -1; b <= 1 && top; ++b)
            for (long e = -1; e <= 1 && top; ++e) {
              if (a == 0 && b == 0 && e == 0) continue;
              top = c > phi.values[phi.index((i + a + m) % m, (j + b + m) % m, (k + e + m) % m)];
            }
        cat.maxima_by_neighbours += top;
      }
  return cat;
}

PeakCatalog merge(const std::vector<PeakCatalog>& parts) {
  PeakCatalog out;
  std::uint32_t offset = 0;
  for (const auto& p : parts) {
    for (auto e : p.entries) {
      e.realization += offset;
      out.entries.push_back(e);
    }
    offset += static_cast<std::uint32_t>(p.realizations);
    out.volume += p.volume;
    out.realizations += p.realizations;
    out.n_degenerate += p.n_degenerate;
    out.maxima_by_neighbours += p.maxima_by_neighbours;
  }
  return out;
}

}  // namespace chisq
