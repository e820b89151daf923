#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "chisq/density.hpp"
#include "chisq/integrand.hpp"
#include "chisq/spectrum.hpp"

namespace chisq {

// Periodic n^3 lattice, row-major with the last axis fastest.
struct FieldLattice {
  std::size_t n = 0;
  double box_length = 0.0;
  std::vector<double> values;

  double spacing() const { return box_length / static_cast<double>(n); }
  double volume() const { return box_length * box_length * box_length; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n + j) * n + k; }
};

struct LatticeSpec {
  std::size_t n = 128;
  double box_length = 128.0;
};

// N independent Gaussian fields whose Fourier amplitudes have variance
// P(|k|) dk^3, so the lattice variance approximates 4 pi \int k^2 P dk.
// Field alpha uses the random stream derive_seed(seed, alpha).
std::vector<FieldLattice> synthesize_fields(const PowerSpectrum& spectrum, int N, const LatticeSpec& grid,
                                            std::uint64_t seed);

// Same without resolution checks, for arbitrary (possibly zero) P.
std::vector<FieldLattice> synthesize_fields(const std::function<double(double)>& power, int N,
                                            const LatticeSpec& grid, std::uint64_t seed);

// Throws under-resolved-spectrum or grid-too-small.
void check_resolution(const PowerSpectrum& spectrum, const LatticeSpec& grid);

FieldLattice chi2_lattice(const std::vector<FieldLattice>& fields);

enum class DerivativeScheme { spectral, central_difference };

struct LatticeMoments {
  double sigma0_sq;
  double sigma1_sq;
  double sigma2_sq;
  double gradient_component_var;  // mean over axes of <(d_i phi)^2>
  double gamma;
};

// Averages over all supplied fields.
LatticeMoments measure_moments(const std::vector<FieldLattice>& fields,
                               DerivativeScheme scheme = DerivativeScheme::spectral);

struct PeakEntry {
  std::uint32_t realization;
  std::uint64_t index;
  StationaryClass cls;
  double nu_bar;
};

struct PeakCatalog {
  std::vector<PeakEntry> entries;
  double volume = 0.0;
  std::size_t realizations = 0;
  std::size_t n_degenerate = 0;
  std::size_t maxima_by_neighbours = 0;  // lattice points above all 26 neighbours

  std::array<std::size_t, 4> counts() const;
  long signed_count() const;
};

// Spectral first and second derivatives on the lattice, then one Newton
// root search per cell on the trilinear interpolant of the gradient. A root
// belongs to the cell whose half-open unit cube contains it; its height comes
// from a second-order expansion about the nearest lattice point.
PeakCatalog count_stationary(const FieldLattice& phi, double sigma0);

// Concatenates catalogs in argument order and adds volumes.
PeakCatalog merge(const std::vector<PeakCatalog>& parts);

struct Binning {
  double nu_min = 0.0;
  double nu_max = 6.0;
  std::size_t n_bins = 24;
  std::size_t min_count = 50;  // per class, over the whole catalog
};

struct ClassComparison {
  StationaryClass cls;
  std::size_t observed;
  double predicted;
  double predicted_error;
  double ratio;
  double ratio_error;
  std::vector<double> observed_density;  // per bin, per unit volume and nu_bar
  std::vector<double> observed_error;
  std::vector<double> predicted_density;
};

struct ComparisonReport {
  std::vector<double> bin_edges;
  std::array<ClassComparison, 4> classes;
  std::size_t total = 0;
  long signed_count = 0;
  double signed_error = 0.0;  // Poisson, sqrt(total)
  double volume = 0.0;
  std::size_t realizations = 0;
  std::size_t maxima_by_neighbours = 0;
};

// Predicted totals integrate the table over [0, last grid point], holding
// the first row constant down to nu_bar = 0.
ComparisonReport compare(const PeakCatalog& catalog, const DensityTable& predicted, const Binning& binning);

struct ValidationConfig {
  PowerSpectrum spectrum = PowerSpectrum::power_law(1.0, 2.0, 2 * 3.14159265358979323846 / 64);
  int N = 4;
  LatticeSpec grid;
  std::size_t seeds = 5;
  std::uint64_t seed = 1;
  Binning binning;
  IntegratorConfig integrator = VegasConfig{};
  std::vector<double> nu_grid = default_grid();
  unsigned threads = 0;
};

struct ValidationResult {
  SpectralMoments moments;
  LatticeMoments measured;  // averaged over realizations
  DensityTable predicted;
  PeakCatalog catalog;
  ComparisonReport report;
};

ValidationResult run_validation(const ValidationConfig& cfg);

// Catalog CSV: realization,index,class,nu_bar
void write_catalog_csv(std::ostream& out, const PeakCatalog& catalog);
void write_report_json(std::ostream& out, const ValidationResult& result);

}  // namespace chisq
