#include "chisq/density.hpp"

#include <boost/math/distributions/normal.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "chisq/closedform.hpp"
#include "chisq/error.hpp"
#include "chisq/parallel.hpp"

namespace chisq {

namespace {

IntegratorConfig with_seed(const IntegratorConfig& cfg, std::uint64_t seed) {
  return std::visit(
      [seed](auto c) -> IntegratorConfig {
        c.seed = seed;
        c.threads = 1;
        return c;
      },
      cfg);
}

std::uint64_t seed_of(const IntegratorConfig& cfg) {
  return std::visit([](const auto& c) { return c.seed; }, cfg);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view density_class_name(DensityClass c) {
  switch (c) {
    case DensityClass::minimum: return "minimum";
    case DensityClass::saddle1: return "saddle1";
    case DensityClass::saddle2: return "saddle2";
    case DensityClass::maximum: return "maximum";
    case DensityClass::signed_sum: return "signed";
  }
  return "unknown";
}

DensityClass density_class_from_name(std::string_view name) {
  for (auto c : kDensityClasses)
    if (density_class_name(c) == name) return c;
  fail_validation("range", "unknown density class '" + std::string(name) + "'");
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (!(lo > 0 && hi >= lo)) fail_validation("range", "log grid needs 0 < lo <= hi");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (!(hi >= lo)) fail_validation("range", "linear grid needs lo <= hi");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  return g;
}

std::vector<double> default_grid() { return log_grid(0.05, 8.0, 80); }

std::array<DensityRecord, 5> density_point(int N, double gamma, double sigma0, double sigma1, double nu_bar,
                                           const IntegratorConfig& cfg) {
  require_supported_N(N);
  if (!(gamma > 0 && gamma < 1)) fail_validation("degenerate-gamma", "gamma must lie strictly inside (0, 1)");
  if (!(nu_bar > 0)) fail_validation("nonpositive-nu", "nu_bar must be positive");
  const double scale = prefactor_alpha(sigma0, sigma1, nu_bar) * chi2_pdf(N, nu_bar);
  const ExpectationSuite suite = expectation_suite(IntegrandParams{N, gamma, nu_bar}, cfg);
  std::array<DensityRecord, 5> out;
  for (std::size_t i = 0; i < 5; ++i) {
    const Estimate& e = suite.channels[i];
    out[i] = {nu_bar, kDensityClasses[i], scale * e.value, scale * e.std_error, e.n_samples};
  }
  return out;
}

DensityTable density_sweep(const SweepSpec& spec) {
  for (std::size_t i = 1; i < spec.nu_grid.size(); ++i)
    if (!(spec.nu_grid[i] > spec.nu_grid[i - 1])) fail_validation("range", "nu grid must be strictly increasing");
  for (double v : spec.nu_grid)
    if (!(v > 0)) fail_validation("nonpositive-nu", "nu grid values must be positive");
  require_supported_N(spec.N);

  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = spec.nu_grid.size();
  std::vector<std::array<DensityRecord, 5>> rows(n);
  std::vector<std::optional<PointFailure>> failed(n);
  const std::uint64_t master = seed_of(spec.integrator);

  parallel_for(n, spec.threads, [&](std::size_t i) {
    const double nu = spec.nu_grid[i];
    try {
      rows[i] = density_point(spec.N, spec.gamma, spec.sigma0, spec.sigma1, nu,
                              with_seed(spec.integrator, derive_seed(master, i)));
    } catch (const Error& e) {
      failed[i] = PointFailure{i, nu, e.code(), e.what()};
      const double nan = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t c = 0; c < 5; ++c) rows[i][c] = {nu, kDensityClasses[c], nan, nan, 0};
    }
  });

  DensityTable t;
  t.N = spec.N;
  t.gamma = spec.gamma;
  t.sigma0 = spec.sigma0;
  t.sigma1 = spec.sigma1;
  for (std::size_t i = 0; i < n; ++i) {
    t.records.insert(t.records.end(), rows[i].begin(), rows[i].end());
    if (failed[i]) t.failures.push_back(*failed[i]);
  }
  t.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

ConsistencyReport consistency_check(const DensityTable& table, double family_sigma) {
  // Group rows by grid point, keeping first-seen order.
  std::vector<double> order;
  std::map<double, std::array<const DensityRecord*, 5>> by_nu;
  for (const auto& r : table.records) {
    auto [it, fresh] = by_nu.try_emplace(r.nu_bar, std::array<const DensityRecord*, 5>{});
    if (fresh) order.push_back(r.nu_bar);
    auto& slot = it->second[static_cast<std::size_t>(r.cls)];
    if (slot) fail_validation("incomplete-table", "duplicate " + std::string(density_class_name(r.cls)) +
                                                      " row at nu_bar = " + fmt(r.nu_bar));
    slot = &r;
  }

  ConsistencyReport rep;
  for (double nu : order) {
    const auto& slots = by_nu[nu];
    for (std::size_t c = 0; c < 5; ++c) {
      if (!slots[c] || !std::isfinite(slots[c]->density) || !std::isfinite(slots[c]->std_error))
        fail_validation("incomplete-table", "grid point nu_bar = " + fmt(nu) + " lacks a valid " +
                                                std::string(density_class_name(kDensityClasses[c])) + " row");
    }
    const DensityRecord& s = *slots[4];
    ConsistencyPoint p;
    p.nu_bar = nu;
    p.signed_mc = s.density;
    p.signed_closed = signed_density(table.N, nu, table.sigma0, table.sigma1);
    p.std_error = s.std_error;
    const double diff = p.signed_mc - p.signed_closed;
    p.z = s.std_error > 0 ? diff / s.std_error : (diff == 0 ? 0.0 : std::copysign(INFINITY, diff));
    rep.max_abs_z = std::max(rep.max_abs_z, std::abs(p.z));
    rep.points.push_back(p);
  }

  const boost::math::normal unit;
  const double alpha = 2 * boost::math::cdf(boost::math::complement(unit, family_sigma));
  const double per_point = alpha / std::max<std::size_t>(rep.points.size(), 1);
  rep.threshold = boost::math::quantile(boost::math::complement(unit, per_point / 2));
  rep.pass = rep.max_abs_z < rep.threshold;
  return rep;
}

void write_csv(std::ostream& out, const DensityTable& table, bool per_nu) {
  const double f = per_nu ? 1.0 / table.sigma0 : 1.0;
  out << "nu_bar,class,density,std_error,n_samples\n";
  for (const auto& r : table.records)
    out << fmt(r.nu_bar) << ',' << density_class_name(r.cls) << ',' << fmt(r.density * f) << ','
        << fmt(r.std_error * f) << ',' << r.n_samples << '\n';
}

void write_json(std::ostream& out, const DensityTable& table, bool per_nu) {
  const double f = per_nu ? 1.0 / table.sigma0 : 1.0;
  nlohmann::ordered_json j;
  j["N"] = table.N;
  j["gamma"] = table.gamma;
  j["sigma0"] = table.sigma0;
  j["sigma1"] = table.sigma1;
  j["per_unit"] = per_nu ? "nu" : "nu_bar";
  auto& recs = j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : table.records) {
    nlohmann::ordered_json row;
    row["nu_bar"] = r.nu_bar;
    row["class"] = density_class_name(r.cls);
    row["density"] = std::isfinite(r.density) ? nlohmann::ordered_json(r.density * f) : nlohmann::ordered_json(nullptr);
    row["std_error"] = std::isfinite(r.std_error) ? nlohmann::ordered_json(r.std_error * f) : nlohmann::ordered_json(nullptr);
    row["n_samples"] = r.n_samples;
    recs.push_back(row);
  }
  auto& fails = j["failures"] = nlohmann::ordered_json::array();
  for (const auto& e : table.failures)
    fails.push_back({{"index", e.index}, {"nu_bar", e.nu_bar}, {"code", e.code}, {"message", e.message}});
  out << j.dump(2) << '\n';
}

}  // namespace chisq
