#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace chisq {

// Ordered eigenvalues of the scaled second-derivative matrix; sorted on construction.
class EigenTriple {
 public:
  EigenTriple() = default;
  EigenTriple(double x, double y, double z);

  double l1() const { return l_[0]; }
  double l2() const { return l_[1]; }
  double l3() const { return l_[2]; }
  double operator[](int i) const { return l_[i]; }

  double trace() const { return l_[0] + l_[1] + l_[2]; }
  double trace_sq() const { return l_[0] * l_[0] + l_[1] * l_[1] + l_[2] * l_[2]; }
  double product() const { return l_[0] * l_[1] * l_[2]; }

 private:
  std::array<double, 3> l_{};
};

// Upper-triangular factor T with diagonal (a, b, c) > 0 and off-diagonal (d, e, f).
struct TriangularParams {
  double a = 1, b = 1, c = 1;
  double d = 0, e = 0, f = 0;
};

struct SampleState {
  EigenTriple eigen;
  TriangularParams tri;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

enum class StationaryClass { minimum, saddle_one_negative, saddle_two_negative, maximum };

std::string_view class_name(StationaryClass c);

// (-1)^{number of negative eigenvalues}
int signed_weight(StationaryClass c);

struct ShellCoords {
  double X;
  double r;
  double theta;  // in [0, pi/3]
};

struct IntegrandParams {
  int N;
  double gamma;
  double nu_bar;
  // Added to the (abc)^{N-4} exponent. Zero except in mutation tests.
  double measure_exponent_shift = 0.0;
};

Matrix3 m_from_t(const TriangularParams& t);
double det3(const Matrix3& m);

// Q = sum T^2 + (gamma nu + Tr L)^2 / (1 - gamma^2) + (5/2)(3 Tr L^2 - (Tr L)^2)
double q_exponent(const SampleState& s, double nu_bar, double gamma);

// log[Delta(L) a^2 b (abc)^{N-4}]; -inf when eigenvalues coincide.
double log_measure_weight(const SampleState& s, int N, double exponent_shift = 0.0);

// log of the full unnormalized weight, measure times exp(-Q/2).
double log_weight(const SampleState& s, const IntegrandParams& p);

double vandermonde(const EigenTriple& l);

// (3 nu / gamma) diag(L) + M
Matrix3 hessian_proxy(const SampleState& s, double nu_bar, double gamma);

inline constexpr double kClassifyTol = 1e-12;

// Sylvester decision tree on the leading principal minors. Returns nullopt
// when a minor is within tol * (1 + max|h_ij|)^k of zero.
std::optional<StationaryClass> classify(const Matrix3& h, double tol = kClassifyTol);

// Reference classifier: signs of the characteristic-polynomial roots.
std::optional<StationaryClass> classify_by_eigenvalues(const Matrix3& h, double tol = kClassifyTol);

ShellCoords shell_from_eigen(const EigenTriple& l, double nu_bar, double gamma);
EigenTriple eigen_from_shell(const ShellCoords& s, double nu_bar, double gamma);

// Delta(L) = (2 / 15^{3/2}) r^3 sin(3 theta)
double vandermonde_shell(double r, double theta);

// |d(l1, l2, l3) / d(X, r, theta)|
double shell_jacobian(double r, double gamma);

}  // namespace chisq
