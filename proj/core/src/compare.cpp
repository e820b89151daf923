#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "chisq/error.hpp"
#include "chisq/oracle.hpp"
#include "chisq/parallel.hpp"

namespace chisq {

namespace {

// One class of a density table as a piecewise linear curve, constant below
// the first grid point.
struct Curve {
  std::vector<double> nu, rho, err;

  double at(double v) const {
    if (v <= nu.front()) return rho.front();
    if (v >= nu.back()) return v == nu.back() ? rho.back() : 0.0;
    const auto it = std::upper_bound(nu.begin(), nu.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - nu.begin()) - 1;
    const double s = (v - nu[i]) / (nu[i + 1] - nu[i]);
    return rho[i] + s * (rho[i + 1] - rho[i]);
  }

  // Integral over [0, nu.back()] and its error from independent row errors.
  std::pair<double, double> total() const {
    std::vector<double> w(nu.size(), 0.0);
    w[0] += nu[0];
    for (std::size_t i = 0; i + 1 < nu.size(); ++i) {
      const double h = nu[i + 1] - nu[i];
      w[i] += 0.5 * h;
      w[i + 1] += 0.5 * h;
    }
    double t = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      t += w[i] * rho[i];
      e2 += w[i] * w[i] * err[i] * err[i];
    }
    return {t, std::sqrt(e2)};
  }

  double bin_mean(double a, double b) const {
    constexpr int kSub = 64;
    double s = 0.0;
    for (int i = 0; i < kSub; ++i) s += at(a + (b - a) * (i + 0.5) / kSub);
    return s / kSub;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ComparisonReport compare(const PeakCatalog& catalog, const DensityTable& predicted, const Binning& binning) {
  if (binning.n_bins == 0 || !(binning.nu_max > binning.nu_min) || binning.nu_min < 0)
    fail_validation("range", "binning needs 0 <= nu_min < nu_max and at least one bin");
  if (!(catalog.volume > 0)) fail_validation("range", "catalog has no volume");

  std::array<Curve, 4> curves;
  for (const auto& r : predicted.records) {
    if (r.cls == DensityClass::signed_sum) continue;
    if (!std::isfinite(r.density) || !std::isfinite(r.std_error))
      fail_validation("incomplete-table", "predicted table has a failed row at nu_bar = " + fmt(r.nu_bar));
    auto& c = curves[static_cast<std::size_t>(r.cls)];
    c.nu.push_back(r.nu_bar);
    c.rho.push_back(r.density);
    c.err.push_back(r.std_error);
  }
  for (const auto& c : curves)
    if (c.nu.size() < 2) fail_validation("range", "predicted table needs at least two grid points per class");
  const double table_max = curves[0].nu.back();
  if (binning.nu_max > table_max)
    fail_validation("range", "binning reaches nu_bar = " + fmt(binning.nu_max) + " beyond the predicted table (" +
                                 fmt(table_max) + ")");
  double catalog_max = 0.0;
  for (const auto& e : catalog.entries) catalog_max = std::max(catalog_max, e.nu_bar);
  if (catalog_max > table_max)
    fail_validation("range", "catalog reaches nu_bar = " + fmt(catalog_max) + " beyond the predicted table");

  ComparisonReport rep;
  rep.volume = catalog.volume;
  rep.realizations = catalog.realizations;
  rep.maxima_by_neighbours = catalog.maxima_by_neighbours;
  const double width = (binning.nu_max - binning.nu_min) / static_cast<double>(binning.n_bins);
  for (std::size_t b = 0; b <= binning.n_bins; ++b) rep.bin_edges.push_back(binning.nu_min + width * b);

  const auto counts = catalog.counts();
  for (std::size_t c = 0; c < 4; ++c) {
    ClassComparison& cc = rep.classes[c];
    cc.cls = static_cast<StationaryClass>(c);
    cc.observed = counts[c];
    const auto [t, te] = curves[c].total();
    cc.predicted = t * catalog.volume;
    cc.predicted_error = te * catalog.volume;
    cc.ratio = cc.predicted > 0 ? cc.observed / cc.predicted : INFINITY;
    cc.ratio_error = cc.observed > 0
                         ? cc.ratio * std::sqrt(1.0 / cc.observed +
                                                std::pow(cc.predicted_error / cc.predicted, 2))
                         : INFINITY;
    std::vector<std::size_t> hist(binning.n_bins, 0);
    for (const auto& e : catalog.entries) {
      if (static_cast<std::size_t>(e.cls) != c || e.nu_bar < binning.nu_min || e.nu_bar >= binning.nu_max) continue;
      ++hist[std::min(binning.n_bins - 1, static_cast<std::size_t>((e.nu_bar - binning.nu_min) / width))];
    }
    for (std::size_t b = 0; b < binning.n_bins; ++b) {
      const double norm = catalog.volume * width;
      cc.observed_density.push_back(hist[b] / norm);
      cc.observed_error.push_back(std::sqrt(static_cast<double>(hist[b])) / norm);
      cc.predicted_density.push_back(curves[c].bin_mean(rep.bin_edges[b], rep.bin_edges[b + 1]));
    }
    rep.total += cc.observed;
  }
  for (const auto& cc : rep.classes)
    if (cc.observed < binning.min_count)
      fail_numerical("insufficient-statistics", std::string(class_name(cc.cls)) + " has " +
                                                    std::to_string(cc.observed) + " entries, fewer than " +
                                                    std::to_string(binning.min_count));
  rep.signed_count = catalog.signed_count();
  rep.signed_error = std::sqrt(static_cast<double>(rep.total));
  return rep;
}

ValidationResult run_validation(const ValidationConfig& cfg) {
  ValidationResult res;
  res.moments = spectral_params(cfg.spectrum);
  if (res.moments.degenerate)
    fail_numerical("degenerate-gamma", "the validation spectrum has gamma at the delta-shell limit");
  check_resolution(cfg.spectrum, cfg.grid);
  if (cfg.seeds == 0) fail_validation("range", "need at least one seed");

  SweepSpec sweep;
  sweep.N = cfg.N;
  sweep.gamma = res.moments.gamma;
  sweep.sigma0 = res.moments.sigma0;
  sweep.sigma1 = res.moments.sigma1;
  sweep.nu_grid = cfg.nu_grid;
  sweep.integrator = cfg.integrator;
  sweep.threads = cfg.threads;
  res.predicted = density_sweep(sweep);

  std::vector<PeakCatalog> parts(cfg.seeds);
  std::vector<LatticeMoments> measured(cfg.seeds);
  // Realizations run one at a time; each one already holds several n^3 arrays.
  for (std::size_t s = 0; s < cfg.seeds; ++s) {
    const auto fields = synthesize_fields(cfg.spectrum, cfg.N, cfg.grid, derive_seed(cfg.seed, s));
    measured[s] = measure_moments(fields);
    parts[s] = count_stationary(chi2_lattice(fields), res.moments.sigma0);
  }
  res.catalog = merge(parts);
  LatticeMoments avg{};
  for (const auto& m : measured) {
    avg.sigma0_sq += m.sigma0_sq / cfg.seeds;
    avg.sigma1_sq += m.sigma1_sq / cfg.seeds;
    avg.sigma2_sq += m.sigma2_sq / cfg.seeds;
  }
  avg.gradient_component_var = avg.sigma1_sq / 3;
  avg.gamma = avg.sigma1_sq / std::sqrt(avg.sigma0_sq * avg.sigma2_sq);
  res.measured = avg;
  res.report = compare(res.catalog, res.predicted, cfg.binning);
  return res;
}

void write_catalog_csv(std::ostream& out, const PeakCatalog& catalog) {
  out << "realization,index,class,nu_bar\n";
  for (const auto& e : catalog.entries)
    out << e.realization << ',' << e.index << ',' << class_name(e.cls) << ',' << fmt(e.nu_bar) << '\n';
}

void write_report_json(std::ostream& out, const ValidationResult& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["spectrum"] = {{"sigma0", r.moments.sigma0},
                   {"sigma1", r.moments.sigma1},
                   {"sigma2", r.moments.sigma2},
                   {"gamma", r.moments.gamma}};
  j["lattice_moments"] = {{"sigma0_sq", r.measured.sigma0_sq},
                          {"sigma1_sq", r.measured.sigma1_sq},
                          {"sigma2_sq", r.measured.sigma2_sq},
                          {"gamma", r.measured.gamma}};
  const auto& rep = r.report;
  j["realizations"] = rep.realizations;
  j["volume"] = rep.volume;
  j["total"] = rep.total;
  j["signed_count"] = rep.signed_count;
  j["signed_error"] = rep.signed_error;
  j["degenerate"] = r.catalog.n_degenerate;
  j["maxima_by_neighbours"] = rep.maxima_by_neighbours;
  j["bin_edges"] = rep.bin_edges;
  auto& cls = j["classes"] = ordered_json::array();
  for (const auto& c : rep.classes)
    cls.push_back({{"class", class_name(c.cls)},
                   {"observed", c.observed},
                   {"predicted", c.predicted},
                   {"predicted_error", c.predicted_error},
                   {"ratio", c.ratio},
                   {"ratio_error", c.ratio_error},
                   {"observed_density", c.observed_density},
                   {"observed_error", c.observed_error},
                   {"predicted_density", c.predicted_density}});
  out << j.dump(2) << '\n';
}

}  // namespace chisq
