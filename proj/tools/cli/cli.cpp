#include "cli/cli.hpp"

#include <boost/program_options.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "chisq/closedform.hpp"
#include "chisq/density.hpp"
#include "chisq/error.hpp"
#include "chisq/identities.hpp"
#include "chisq/integrators.hpp"
#include "chisq/oracle.hpp"
#include "chisq/parallel.hpp"
#include "chisq/spectrum.hpp"
#include "chisq/version.hpp"

namespace chisq::cli {

namespace po = boost::program_options;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kUsage =
    "usage: chisq <command> [options]\n"
    "\n"
    "commands:\n"
    "  moments   spectral moments and gamma of a power spectrum\n"
    "  density   number densities of stationary points over a nu_bar grid\n"
    "  selftest  analytic identity suite for both integrators\n"
    "  validate  lattice realizations against the predicted densities\n"
    "\n"
    "Run 'chisq <command> --help' for the options of a command.\n";

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      fail_validation("invalid-spectrum", "'" + item + "' is not a number");
    }
  }
  return out;
}

// tophat:A,kmax  powerlaw:A,ns,kcut  shell:A,k0,width
PowerSpectrum parse_spectrum(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    fail_validation("invalid-spectrum", "spectrum '" + text + "' must look like family:p1,p2[,p3]");
  const std::string family = text.substr(0, colon);
  const auto v = parse_numbers(text.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (v.size() != n)
      fail_validation("invalid-spectrum", family + " takes " + std::to_string(n) + " parameters, got " +
                                              std::to_string(v.size()));
  };
  if (family == "tophat") {
    need(2);
    return PowerSpectrum::top_hat(v[0], v[1]);
  }
  if (family == "powerlaw") {
    need(3);
    return PowerSpectrum::power_law(v[0], v[1], v[2]);
  }
  if (family == "shell") {
    need(3);
    return PowerSpectrum::gaussian_shell(v[0], v[1], v[2]);
  }
  fail_validation("invalid-spectrum", "unknown spectrum family '" + family + "' (tophat, powerlaw, shell)");
}

void add_spectrum_options(po::options_description& d) {
  d.add_options()("spectrum", po::value<std::string>(), "tophat:A,kmax | powerlaw:A,ns,kcut | shell:A,k0,width")(
      "table", po::value<std::string>(), "two-column (k, P) power spectrum table");
}

std::optional<PowerSpectrum> spectrum_from(const po::variables_map& vm) {
  if (vm.count("spectrum") && vm.count("table"))
    fail_validation("range", "--spectrum and --table are mutually exclusive");
  if (vm.count("spectrum")) return parse_spectrum(vm["spectrum"].as<std::string>());
  if (vm.count("table")) return PowerSpectrum::read_table_file(vm["table"].as<std::string>());
  return std::nullopt;
}

json spectrum_json(const po::variables_map& vm) {
  if (vm.count("spectrum")) return vm["spectrum"].as<std::string>();
  if (vm.count("table")) return "table:" + vm["table"].as<std::string>();
  return nullptr;
}

// Output goes to --out when given, else to the command's stdout stream.
class Sink {
 public:
  Sink(const po::variables_map& vm, std::ostream& fallback) : stream_(&fallback) {
    if (vm.count("out")) {
      path_ = vm["out"].as<std::string>();
      file_.open(path_, std::ios::binary);
      if (!file_) fail_validation("range", "cannot open output file " + path_);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

  void manifest(const json& config) {
    if (path_.empty()) return;
    std::ofstream m(path_ + ".manifest.json", std::ios::binary);
    if (!m) fail_validation("range", "cannot open manifest " + path_ + ".manifest.json");
    json j;
    j["tool"] = "chisq";
    j["version"] = kVersion;
    j["output"] = path_;
    j["config"] = config;
    m << j.dump(2) << '\n';
  }

 private:
  std::ostream* stream_;
  std::ofstream file_;
  std::string path_;
};

po::variables_map parse(const po::options_description& visible, const po::options_description& hidden,
                        const std::vector<std::string>& args) {
  po::options_description all;
  all.add(visible).add(hidden);
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(all).run(), vm);
  po::notify(vm);
  return vm;
}

po::variables_map parse(const po::options_description& visible, const std::vector<std::string>& args) {
  return parse(visible, po::options_description(), args);
}

bool wants_help(const std::vector<std::string>& args) {
  for (const auto& a : args)
    if (a == "--help" || a == "-h") return true;
  return false;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

int cmd_moments(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  po::options_description d("moments options");
  add_spectrum_options(d);
  d.add_options()("out", po::value<std::string>(), "write JSON here instead of stdout")("help,h", "show options");
  if (wants_help(args)) {
    out << d;
    return kOk;
  }
  const auto vm = parse(d, args);
  const auto spectrum = spectrum_from(vm);
  if (!spectrum) fail_validation("range", "moments needs --spectrum or --table");
  const auto m = spectral_params(*spectrum);
  Sink sink(vm, out);
  json j;
  j["spectrum"] = spectrum->describe();
  j["sigma0"] = m.sigma0;
  j["sigma1"] = m.sigma1;
  j["sigma2"] = m.sigma2;
  j["gamma"] = m.gamma;
  j["degenerate"] = m.degenerate;
  sink.stream() << j.dump(2) << '\n';
  sink.manifest({{"command", "moments"}, {"spectrum", spectrum_json(vm)}});
  if (m.degenerate) {
    err << "warning: degenerate-gamma: gamma = " << fmt(m.gamma, "%.12g")
        << " saturates its bound; the spectrum is a delta shell and the densities are singular\n";
    return kDegenerateGamma;
  }
  return kOk;
}

void add_integrator_options(po::options_description& d) {
  d.add_options()("integrator", po::value<std::string>()->default_value("vegas"), "vegas | mh")(
      "samples", po::value<std::size_t>()->default_value(100000),
      "integrand evaluations per point (VEGAS, over all iterations) or chain samples (MH)")(
      "iterations", po::value<unsigned>()->default_value(10), "VEGAS iterations, the first 3 adapt only")(
      "chains", po::value<unsigned>()->default_value(4), "MH chains");
}

IntegratorConfig integrator_from(const po::variables_map& vm, std::uint64_t seed, unsigned threads) {
  const auto name = vm["integrator"].as<std::string>();
  const auto samples = vm["samples"].as<std::size_t>();
  if (name == "vegas") {
    VegasConfig c;
    c.seed = seed;
    c.threads = threads;
    c.n_iterations = vm["iterations"].as<unsigned>();
    if (c.n_iterations == 0) fail_validation("range", "--iterations must be positive");
    c.n_evals_per_iteration = samples / c.n_iterations;
    return c;
  }
  if (name == "mh") {
    McConfig c;
    c.seed = seed;
    c.threads = threads;
    c.n_samples = samples;
    c.n_chains = vm["chains"].as<unsigned>();
    return c;
  }
  fail_validation("range", "unknown integrator '" + name + "' (vegas, mh)");
}

json integrator_json(const po::variables_map& vm) {
  return {{"integrator", vm["integrator"].as<std::string>()},
          {"samples", vm["samples"].as<std::size_t>()},
          {"iterations", vm["iterations"].as<unsigned>()},
          {"chains", vm["chains"].as<unsigned>()}};
}

int cmd_density(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  po::options_description d("density options");
  add_spectrum_options(d);
  d.add_options()("N", po::value<int>()->default_value(4), "number of squared Gaussian fields")(
      "gamma", po::value<double>(), "spectral shape parameter; overrides the spectrum's value")(
      "sigma0", po::value<double>(), "field scale (default 1, or from the spectrum)")(
      "sigma1", po::value<double>(), "gradient scale (default 1, or from the spectrum)")(
      "nu-min", po::value<double>()->default_value(0.05, "0.05"), "lowest nu_bar")(
      "nu-max", po::value<double>()->default_value(8.0), "highest nu_bar")(
      "nu-count", po::value<std::size_t>()->default_value(80), "grid points")(
      "nu-spacing", po::value<std::string>()->default_value("log"), "log | linear")(
      "seed", po::value<std::uint64_t>()->default_value(1), "master seed")(
      "threads", po::value<unsigned>()->default_value(0), "worker threads, 0 for all cores")(
      "out", po::value<std::string>(), "output file; a manifest is written beside it")(
      "format", po::value<std::string>()->default_value("csv"), "csv | json")(
      "per-nu", po::bool_switch(), "report densities per unit nu = sigma0 nu_bar")("help,h", "show options");
  add_integrator_options(d);
  if (wants_help(args)) {
    out << d;
    return kOk;
  }
  const auto vm = parse(d, args);

  SweepSpec spec;
  spec.N = vm["N"].as<int>();
  const auto spectrum = spectrum_from(vm);
  std::optional<SpectralMoments> moments;
  if (spectrum) {
    moments = spectral_params(*spectrum);
    spec.sigma0 = moments->sigma0;
    spec.sigma1 = moments->sigma1;
  }
  if (vm.count("gamma")) {
    spec.gamma = vm["gamma"].as<double>();
  } else if (moments) {
    if (moments->degenerate)
      fail_validation("degenerate-gamma", "the spectrum is a delta shell (gamma = 1); pass --gamma to override");
    spec.gamma = moments->gamma;
  } else {
    fail_validation("range", "density needs --gamma or a spectrum");
  }
  if (!(spec.gamma > 0 && spec.gamma < 1))
    fail_validation("degenerate-gamma", "gamma must lie strictly inside (0, 1), got " + fmt(spec.gamma));
  if (vm.count("sigma0")) spec.sigma0 = vm["sigma0"].as<double>();
  if (vm.count("sigma1")) spec.sigma1 = vm["sigma1"].as<double>();

  const auto spacing = vm["nu-spacing"].as<std::string>();
  const double lo = vm["nu-min"].as<double>(), hi = vm["nu-max"].as<double>();
  const auto count = vm["nu-count"].as<std::size_t>();
  if (spacing == "log")
    spec.nu_grid = log_grid(lo, hi, count);
  else if (spacing == "linear")
    spec.nu_grid = linear_grid(lo, hi, count);
  else
    fail_validation("range", "unknown --nu-spacing '" + spacing + "' (log, linear)");

  const auto seed = vm["seed"].as<std::uint64_t>();
  spec.threads = vm["threads"].as<unsigned>();
  spec.integrator = integrator_from(vm, seed, 1);
  const auto format = vm["format"].as<std::string>();
  if (format != "csv" && format != "json") fail_validation("range", "unknown --format '" + format + "'");
  const bool per_nu = vm["per-nu"].as<bool>();

  const auto table = density_sweep(spec);

  Sink sink(vm, out);
  if (format == "csv")
    write_csv(sink.stream(), table, per_nu);
  else
    write_json(sink.stream(), table, per_nu);
  json cfg = {{"command", "density"},
              {"spectrum", spectrum_json(vm)},
              {"N", spec.N},
              {"gamma", spec.gamma},
              {"sigma0", spec.sigma0},
              {"sigma1", spec.sigma1},
              {"nu_min", lo},
              {"nu_max", hi},
              {"nu_count", count},
              {"nu_spacing", spacing},
              {"seed", seed},
              {"format", format},
              {"per_nu", per_nu}};
  cfg.update(integrator_json(vm));
  sink.manifest(cfg);

  err << "density: " << spec.nu_grid.size() << " points in " << fmt(table.wall_seconds, "%.2f") << " s\n";
  for (const auto& f : table.failures)
    err << "point " << f.index << " (nu_bar = " << fmt(f.nu_bar) << ") failed: " << f.code << ": " << f.message
        << '\n';
  if (!table.failures.empty()) return kNumerical;
  if (!spec.nu_grid.empty()) {
    const auto rep = consistency_check(table);
    err << "consistency: max |z| = " << fmt(rep.max_abs_z, "%.3f") << " over " << rep.points.size()
        << " points, threshold " << fmt(rep.threshold, "%.3f") << ": " << (rep.pass ? "pass" : "FAIL") << '\n';
  }
  return kOk;
}

struct IdentityResult {
  std::string name;
  std::string formula;
  double value;
  double error;
  double expected;
  double z;
};

IdentityResult make_result(std::string name, std::string formula, double value, double error, double expected) {
  const double diff = value - expected;
  const double z = error > 0 ? diff / error : (diff == 0 ? 0.0 : INFINITY);
  return {std::move(name), std::move(formula), value, error, expected, z};
}

int cmd_selftest(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  po::options_description d("selftest options");
  d.add_options()("seed", po::value<std::uint64_t>()->default_value(1), "master seed")(
      "samples", po::value<std::size_t>()->default_value(100000), "VEGAS evaluations per identity")(
      "mh-samples", po::value<std::size_t>()->default_value(400000), "MH samples per identity")(
      "matrix-samples", po::value<std::size_t>()->default_value(1000000), "samples per matrix identity")(
      "threads", po::value<unsigned>()->default_value(0), "worker threads, 0 for all cores")(
      "threshold", po::value<double>()->default_value(4.0), "failing |z|")("help,h", "show options");
  po::options_description hidden;
  hidden.add_options()("corrupt-weight", po::value<double>()->default_value(0.0));
  if (wants_help(args)) {
    out << d;
    return kOk;
  }
  const auto vm = parse(d, hidden, args);
  const auto seed = vm["seed"].as<std::uint64_t>();
  const auto threads = vm["threads"].as<unsigned>();
  const double shift = vm["corrupt-weight"].as<double>();
  const double threshold = vm["threshold"].as<double>();
  std::uint64_t stream = 0;

  auto vegas = [&] {
    VegasConfig c;
    c.seed = derive_seed(seed, ++stream);
    c.n_evals_per_iteration = vm["samples"].as<std::size_t>() / c.n_iterations;
    c.threads = threads;
    return c;
  };
  auto mh = [&] {
    McConfig c;
    c.seed = derive_seed(seed, ++stream);
    c.n_samples = vm["mh-samples"].as<std::size_t>();
    c.threads = threads;
    return c;
  };
  auto params = [shift](int N, double gamma, double nu) { return IntegrandParams{N, gamma, nu, shift}; };
  auto both = [&](std::vector<IdentityResult>& res, const std::string& name, const std::string& formula,
                  const Observable& g, const IntegrandParams& p, double expected) {
    const auto a = mh_expectation(g, p, mh());
    res.push_back(make_result(name + " [mh]", formula, a.value, a.std_error, expected));
    const auto b = vegas_expectation(g, p, vegas());
    res.push_back(make_result(name + " [vegas]", formula, b.value, b.std_error, expected));
  };

  std::vector<IdentityResult> res;
  const Observable det_m = [](const SampleState& s) { return det3(m_from_t(s.tri)); };
  for (int N : {4, 5, 6})
    both(res, "det M, N=" + std::to_string(N), "<det M> = (N-1)(N-2)(N-3)", det_m, params(N, 0.6, 1.0),
         (N - 1) * (N - 2) * (N - 3));
  for (double nu : {0.5, 1.0, 2.0}) {
    const double k = 3 * nu / 0.6;
    const Observable g = [k](const SampleState& s) { return k * k * k * s.eigen.product(); };
    both(res, "det(3 nu L / gamma), nu=" + fmt(nu), "<det(3 nu L / gamma)> = 3 nu^4 - nu^6", g,
         params(4, 0.6, nu), 3 * std::pow(nu, 4) - std::pow(nu, 6));
  }
  both(res, "min eigenvalue, N=4", "<min l> = -3 / sqrt(10 pi) - gamma nu / 3",
       [](const SampleState& s) { return s.eigen.l1(); }, params(4, 0.6, 1.0),
       -3 / std::sqrt(10 * std::numbers::pi) - 0.2);
  for (int N : {4, 5})
    for (double nu : {0.5, 1.0, 2.0, 4.0}) {
      const Observable g = [nu](const SampleState& s) { return det3(hessian_proxy(s, nu, 0.6)); };
      const auto e = vegas_expectation(g, params(N, 0.6, nu), vegas());
      res.push_back(make_result("signed polynomial, N=" + std::to_string(N) + " nu=" + fmt(nu),
                                "<det(3 nu L / gamma + M)> = (N-1)(N-2)(N-3) - 3(N-1)^2 nu^2 + 3N nu^4 - nu^6",
                                e.value, e.std_error, signed_expectation(N, nu)));
    }
  {
    const auto e = vegas_normalization(params(4, 0.6, 1.0), vegas());
    res.push_back(make_result("normalization V_N, N=4 gamma=0.6", "V_N closed form", e.value, e.std_error,
                              normalization_VN(4, 0.6)));
  }
  const auto matrix_samples = vm["matrix-samples"].as<std::size_t>();
  {
    const auto c = symmetric_matrix_identity(derive_seed(seed, ++stream), matrix_samples);
    res.push_back(make_result("symmetric matrix measure, direct", "int dH exp(-Tr H^2/2) = 2^{3/2} pi^3", c.lhs,
                              c.lhs_error, c.exact));
    res.push_back(make_result("symmetric matrix measure, eigenvalues",
                              "Vol[O(3)] / (2^3 3!) int dL Delta(L) exp(-Tr L^2/2) = 2^{3/2} pi^3", c.rhs,
                              c.rhs_error, c.exact));
  }
  {
    const auto c = rectangular_matrix_identity(4, derive_seed(seed, ++stream), matrix_samples);
    res.push_back(make_result("rectangular matrix measure, direct", "int dA exp(-Tr A^T A/2) = (2 pi)^6", c.lhs,
                              c.lhs_error, c.exact));
    res.push_back(make_result("rectangular matrix measure, triangular",
                              "8 pi^{3n/2} / Gamma_3(n/2) int dT a^{n-1} b^{n-2} c^{n-3} exp(-Tr T^T T/2)", c.rhs,
                              c.rhs_error, c.exact));
  }

  std::size_t failed = 0;
  for (const auto& r : res) {
    const bool ok = std::abs(r.z) < threshold;
    failed += !ok;
    out << (ok ? "PASS  " : "FAIL  ") << r.name << "  " << fmt(r.value, "%.8g") << " +- " << fmt(r.error, "%.3g")
        << "  expected " << fmt(r.expected, "%.8g") << "  z = " << fmt(r.z, "%+.2f") << "  {" << r.formula << "}\n";
  }
  out << (failed == 0 ? "selftest passed" : "selftest FAILED") << ": " << res.size() - failed << "/" << res.size()
      << " identities within " << fmt(threshold) << " sigma\n";
  if (shift != 0) err << "note: weight exponent corrupted by " << fmt(shift) << "\n";
  return failed == 0 ? kOk : kCheckFailed;
}

int cmd_validate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  po::options_description d("validate options");
  add_spectrum_options(d);
  d.add_options()("N", po::value<int>()->default_value(4), "number of squared Gaussian fields")(
      "grid", po::value<std::size_t>()->default_value(128), "lattice points per side")(
      "box", po::value<double>()->default_value(128.0), "box side length")(
      "seeds", po::value<std::size_t>()->default_value(5), "independent realizations")(
      "seed", po::value<std::uint64_t>()->default_value(1), "master seed")(
      "bins", po::value<std::size_t>()->default_value(24), "histogram bins in nu_bar")(
      "hist-max", po::value<double>()->default_value(6.0), "histogram upper edge in nu_bar")(
      "min-count", po::value<std::size_t>()->default_value(50), "smallest acceptable count per class")(
      "nu-count", po::value<std::size_t>()->default_value(80), "prediction grid points on [0.05, 8]")(
      "threads", po::value<unsigned>()->default_value(0), "worker threads, 0 for all cores")(
      "out", po::value<std::string>(), "report file; a manifest is written beside it")(
      "catalog", po::value<std::string>(), "also write the stationary-point catalog as CSV")("help,h",
                                                                                             "show options");
  add_integrator_options(d);
  if (wants_help(args)) {
    out << d;
    return kOk;
  }
  const auto vm = parse(d, args);
  ValidationConfig cfg;
  if (auto s = spectrum_from(vm)) cfg.spectrum = *s;
  cfg.N = vm["N"].as<int>();
  cfg.grid = {vm["grid"].as<std::size_t>(), vm["box"].as<double>()};
  cfg.seeds = vm["seeds"].as<std::size_t>();
  cfg.seed = vm["seed"].as<std::uint64_t>();
  cfg.binning.n_bins = vm["bins"].as<std::size_t>();
  cfg.binning.nu_max = vm["hist-max"].as<double>();
  cfg.binning.min_count = vm["min-count"].as<std::size_t>();
  cfg.nu_grid = log_grid(0.05, 8.0, vm["nu-count"].as<std::size_t>());
  cfg.threads = vm["threads"].as<unsigned>();
  cfg.integrator = integrator_from(vm, cfg.seed, 1);

  const auto start = std::chrono::steady_clock::now();
  const auto result = run_validation(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Sink sink(vm, out);
  write_report_json(sink.stream(), result);
  if (vm.count("catalog")) {
    std::ofstream c(vm["catalog"].as<std::string>(), std::ios::binary);
    if (!c) fail_validation("range", "cannot open catalog file");
    write_catalog_csv(c, result.catalog);
  }
  json mc = {{"command", "validate"},
             {"spectrum", vm.count("spectrum") || vm.count("table") ? spectrum_json(vm) : json(cfg.spectrum.describe())},
             {"N", cfg.N},
             {"grid", cfg.grid.n},
             {"box", cfg.grid.box_length},
             {"seeds", cfg.seeds},
             {"seed", cfg.seed},
             {"bins", cfg.binning.n_bins},
             {"hist_max", cfg.binning.nu_max},
             {"min_count", cfg.binning.min_count},
             {"nu_count", cfg.nu_grid.size()}};
  mc.update(integrator_json(vm));
  sink.manifest(mc);

  const auto& rep = result.report;
  err << "validate: " << rep.realizations << " realizations of " << cfg.grid.n << "^3 in " << fmt(secs, "%.1f")
      << " s\n";
  for (const auto& c : rep.classes)
    err << "  " << class_name(c.cls) << ": observed " << c.observed << ", predicted " << fmt(c.predicted, "%.1f")
        << ", ratio " << fmt(c.ratio, "%.4f") << " +- " << fmt(c.ratio_error, "%.4f") << '\n';
  err << "  signed count " << rep.signed_count << " +- " << fmt(rep.signed_error, "%.1f") << '\n';
  return kOk;
}

int exit_code_for(const Error& e) {
  if (e.code() == "degenerate-gamma") return kDegenerateGamma;
  switch (e.kind()) {
    case ErrorKind::validation: return kValidation;
    case ErrorKind::numerical: return kNumerical;
    case ErrorKind::unsupported: return kUnsupported;
  }
  return kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsage;
    return kValidation;
  }
  const std::string& command = args.front();
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  const std::map<std::string, std::function<int(const std::vector<std::string>&, std::ostream&, std::ostream&)>>
      commands = {{"moments", cmd_moments},
                  {"density", cmd_density},
                  {"selftest", cmd_selftest},
                  {"validate", cmd_validate}};
  if (command == "--help" || command == "-h" || command == "help") {
    out << kUsage;
    return kOk;
  }
  if (command == "--version") {
    out << "chisq " << kVersion << '\n';
    return kOk;
  }
  const auto it = commands.find(command);
  if (it == commands.end()) {
    err << "error: unknown command '" << command << "'\n" << kUsage;
    return kValidation;
  }
  try {
    return it->second(rest, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const po::error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace chisq::cli
