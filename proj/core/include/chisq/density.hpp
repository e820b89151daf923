#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "chisq/integrators.hpp"

namespace chisq {

enum class DensityClass { minimum, saddle1, saddle2, maximum, signed_sum };

inline constexpr std::array<DensityClass, 5> kDensityClasses = {
    DensityClass::minimum, DensityClass::saddle1, DensityClass::saddle2, DensityClass::maximum,
    DensityClass::signed_sum};

std::string_view density_class_name(DensityClass c);
DensityClass density_class_from_name(std::string_view name);

// One row: number density per unit nu_bar in units of sigma1^3 / sigma0^3
// (absolute when sigma0, sigma1 carry units).
struct DensityRecord {
  double nu_bar;
  DensityClass cls;
  double density;
  double std_error;
  std::size_t n_samples;
};

struct PointFailure {
  std::size_t index;
  double nu_bar;
  std::string code;
  std::string message;
};

struct SweepSpec {
  int N = 4;
  double gamma = 0.6;
  double sigma0 = 1.0;
  double sigma1 = 1.0;
  std::vector<double> nu_grid;
  IntegratorConfig integrator = VegasConfig{};
  unsigned threads = 0;  // workers across grid points
};

struct DensityTable {
  int N = 4;
  double gamma = 0.0;
  double sigma0 = 1.0;
  double sigma1 = 1.0;
  std::vector<DensityRecord> records;  // grid order, five classes per point
  std::vector<PointFailure> failures;
  double wall_seconds = 0.0;
};

std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

// 80 log-spaced points on [0.05, 8].
std::vector<double> default_grid();

std::array<DensityRecord, 5> density_point(int N, double gamma, double sigma0, double sigma1, double nu_bar,
                                           const IntegratorConfig& cfg);

// Grid point i runs with seed derive_seed(seed, i) so results do not depend
// on scheduling. Failures are recorded as NaN rows and in `failures`.
DensityTable density_sweep(const SweepSpec& spec);

struct ConsistencyPoint {
  double nu_bar;
  double signed_mc;
  double signed_closed;
  double std_error;
  double z;
};

struct ConsistencyReport {
  std::vector<ConsistencyPoint> points;
  double max_abs_z = 0.0;
  double threshold = 0.0;  // per-point |z| bound after the multiplicity correction
  bool pass = true;
};

// Signed Monte Carlo rows against the closed form. `family_sigma` is the
// family-wise level in Gaussian sigmas, Bonferroni corrected over points.
ConsistencyReport consistency_check(const DensityTable& table, double family_sigma = 4.0);

// Columns nu_bar,class,density,std_error,n_samples. With per_nu the density
// and its error are per unit nu = sigma0 nu_bar.
void write_csv(std::ostream& out, const DensityTable& table, bool per_nu = false);
void write_json(std::ostream& out, const DensityTable& table, bool per_nu = false);

}  // namespace chisq
