#include "chisq/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chisq/error.hpp"

namespace chisq {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
const double kSqrt5 = std::sqrt(5.0);
const double kSqrt15 = std::sqrt(15.0);

void require_gamma(double gamma) {
  if (!(gamma > 0 && gamma < 1))
    fail_validation("degenerate-gamma", "gamma must lie strictly inside (0, 1)");
}

}  // namespace

EigenTriple::EigenTriple(double x, double y, double z) : l_{x, y, z} {
  if (l_[0] > l_[1]) std::swap(l_[0], l_[1]);
  if (l_[1] > l_[2]) std::swap(l_[1], l_[2]);
  if (l_[0] > l_[1]) std::swap(l_[0], l_[1]);
}

std::string_view class_name(StationaryClass c) {
  switch (c) {
    case StationaryClass::minimum: return "minimum";
    case StationaryClass::saddle_one_negative: return "saddle1";
    case StationaryClass::saddle_two_negative: return "saddle2";
    case StationaryClass::maximum: return "maximum";
  }
  return "unknown";
}

int signed_weight(StationaryClass c) {
  switch (c) {
    case StationaryClass::minimum:
    case StationaryClass::saddle_two_negative: return 1;
    case StationaryClass::saddle_one_negative:
    case StationaryClass::maximum: return -1;
  }
  return 0;
}

Matrix3 m_from_t(const TriangularParams& t) {
  const double be_df = t.b * t.e + t.d * t.f;
  return {{{t.a * t.a, t.a * t.d, t.a * t.f},
           {t.a * t.d, t.b * t.b + t.d * t.d, be_df},
           {t.a * t.f, be_df, t.c * t.c + t.e * t.e + t.f * t.f}}};
}

double det3(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double q_exponent(const SampleState& s, double nu_bar, double gamma) {
  require_gamma(gamma);
  const auto& t = s.tri;
  const double tsq = t.a * t.a + t.b * t.b + t.c * t.c + t.d * t.d + t.e * t.e + t.f * t.f;
  const double tr = s.eigen.trace();
  const double shifted = gamma * nu_bar + tr;
  return tsq + shifted * shifted / (1 - gamma * gamma) + 2.5 * (3 * s.eigen.trace_sq() - tr * tr);
}

double vandermonde(const EigenTriple& l) { return (l.l3() - l.l2()) * (l.l3() - l.l1()) * (l.l2() - l.l1()); }

double log_measure_weight(const SampleState& s, int N, double exponent_shift) {
  const double delta = vandermonde(s.eigen);
  const auto& t = s.tri;
  if (!(delta > 0) || !(t.a > 0) || !(t.b > 0) || !(t.c > 0)) return -std::numeric_limits<double>::infinity();
  const double la = std::log(t.a), lb = std::log(t.b), lc = std::log(t.c);
  return std::log(delta) + 2 * la + lb + (N - 4 + exponent_shift) * (la + lb + lc);
}

double log_weight(const SampleState& s, const IntegrandParams& p) {
  const double lm = log_measure_weight(s, p.N, p.measure_exponent_shift);
  if (!std::isfinite(lm)) return lm;
  return lm - 0.5 * q_exponent(s, p.nu_bar, p.gamma);
}

Matrix3 hessian_proxy(const SampleState& s, double nu_bar, double gamma) {
  Matrix3 h = m_from_t(s.tri);
  const double k = 3 * nu_bar / gamma;
  for (int i = 0; i < 3; ++i) h[i][i] += k * s.eigen[i];
  return h;
}

std::optional<StationaryClass> classify(const Matrix3& h, double tol) {
  double norm = 0.0;
  for (const auto& row : h)
    for (double v : row) norm = std::max(norm, std::abs(v));
  const double s = 1.0 + norm;
  const double m1 = h[0][0];
  const double m2 = h[0][0] * h[1][1] - h[0][1] * h[1][0];
  const double m3 = det3(h);
  if (std::abs(m1) <= tol * s || std::abs(m2) <= tol * s * s || std::abs(m3) <= tol * s * s * s) return std::nullopt;
  if (m1 > 0 && m2 > 0 && m3 > 0) return StationaryClass::minimum;
  if (m1 < 0 && m2 > 0 && m3 < 0) return StationaryClass::maximum;
  return m3 > 0 ? StationaryClass::saddle_two_negative : StationaryClass::saddle_one_negative;
}

std::optional<StationaryClass> classify_by_eigenvalues(const Matrix3& h, double tol) {
  // Trigonometric solution of the symmetric 3x3 eigenproblem.
  double norm = 0.0;
  for (const auto& row : h)
    for (double v : row) norm = std::max(norm, std::abs(v));
  const double scale = 1.0 + norm;
  const double p1 = h[0][1] * h[0][1] + h[0][2] * h[0][2] + h[1][2] * h[1][2];
  const double q = (h[0][0] + h[1][1] + h[2][2]) / 3;
  std::array<double, 3> eig;
  if (p1 == 0.0) {
    eig = {h[0][0], h[1][1], h[2][2]};
  } else {
    const double p2 = (h[0][0] - q) * (h[0][0] - q) + (h[1][1] - q) * (h[1][1] - q) + (h[2][2] - q) * (h[2][2] - q) +
                      2 * p1;
    const double p = std::sqrt(p2 / 6);
    Matrix3 b = h;
    for (int i = 0; i < 3; ++i) b[i][i] -= q;
    for (auto& row : b)
      for (double& v : row) v /= p;
    const double r = std::clamp(det3(b) / 2, -1.0, 1.0);
    const double phi = std::acos(r) / 3;
    eig[0] = q + 2 * p * std::cos(phi);
    eig[2] = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
    eig[1] = 3 * q - eig[0] - eig[2];
  }
  int negative = 0;
  for (double e : eig) {
    if (std::abs(e) <= tol * scale) return std::nullopt;
    negative += e < 0;
  }
  constexpr StationaryClass by_count[] = {StationaryClass::minimum, StationaryClass::saddle_one_negative,
                                          StationaryClass::saddle_two_negative, StationaryClass::maximum};
  return by_count[negative];
}

ShellCoords shell_from_eigen(const EigenTriple& l, double nu_bar, double gamma) {
  require_gamma(gamma);
  const double x = 0.5 * kSqrt5 * (2 * l.l3() - l.l2() - l.l1());
  const double y = 0.5 * kSqrt15 * (l.l2() - l.l1());
  ShellCoords s;
  s.X = (gamma * nu_bar + l.trace()) / std::sqrt(1 - gamma * gamma);
  s.r = std::hypot(x, y);
  s.theta = s.r > 0 ? std::atan2(y, x) : 0.0;
  return s;
}

EigenTriple eigen_from_shell(const ShellCoords& s, double nu_bar, double gamma) {
  require_gamma(gamma);
  const double base = (s.X * std::sqrt(1 - gamma * gamma) - gamma * nu_bar) / 3;
  const double k = 2 / (3 * kSqrt5) * s.r;
  const double pi6 = std::numbers::pi / 6;
  return EigenTriple(base - k * std::sin(s.theta + pi6), base + k * std::sin(s.theta - pi6),
                     base + k * std::cos(s.theta));
}

double vandermonde_shell(double r, double theta) { return 2 / std::pow(15.0, 1.5) * r * r * r * std::sin(3 * theta); }

double shell_jacobian(double r, double gamma) { return 2 * kSqrt3 * std::sqrt(1 - gamma * gamma) * r / 45; }

}  // namespace chisq
