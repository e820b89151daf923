#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "chisq/closedform.hpp"
#include "chisq/error.hpp"
#include "chisq/integrators.hpp"
#include "chisq/parallel.hpp"
#include "sampling.hpp"

namespace chisq {

namespace {

constexpr int kDims = 9;
constexpr std::size_t kChunks = 32;
constexpr double kPi = std::numbers::pi;
constexpr double kChi2Flag = 4.0;

class Grid {
 public:
  explicit Grid(unsigned bins) : bins_(bins), edges_(kDims, std::vector<double>(bins + 1)) {
    for (auto& e : edges_)
      for (unsigned i = 0; i <= bins; ++i) e[i] = static_cast<double>(i) / bins;
  }

  unsigned bins() const { return bins_; }

  // Maps z in (0,1) to y in (0,1) on dimension d; returns the bin and multiplies jac.
  unsigned map(int d, double z, double& y, double& jac) const {
    const double pos = z * bins_;
    const unsigned b = std::min(static_cast<unsigned>(pos), bins_ - 1);
    const double lo = edges_[d][b];
    const double width = edges_[d][b + 1] - lo;
    y = lo + (pos - b) * width;
    jac *= bins_ * width;
    return b;
  }

  // Lepage refinement from per-bin accumulated squared weights.
  void refine(const std::vector<std::vector<double>>& acc, double alpha) {
    for (int d = 0; d < kDims; ++d) {
      const auto& raw = acc[d];
      std::vector<double> sm(bins_);
      for (unsigned i = 0; i < bins_; ++i) {
        const double l = i > 0 ? raw[i - 1] : raw[i];
        const double r = i + 1 < bins_ ? raw[i + 1] : raw[i];
        sm[i] = (l + raw[i] + r) / 3;
      }
      double total = 0.0;
      for (double v : sm) total += v;
      if (!(total > 0) || !std::isfinite(total)) continue;
      std::vector<double> imp(bins_);
      double imp_total = 0.0;
      for (unsigned i = 0; i < bins_; ++i) {
        const double x = sm[i] / total;
        imp[i] = x > 0 && x < 1 ? std::pow((x - 1) / std::log(x), alpha) : (x >= 1 ? 1.0 : 0.0);
        imp_total += imp[i];
      }
      if (!(imp_total > 0)) continue;
      const double per_bin = imp_total / bins_;
      std::vector<double> next(bins_ + 1);
      next[0] = 0.0;
      next[bins_] = 1.0;
      const auto& old = edges_[d];
      unsigned j = 0;
      double acc_imp = 0.0;
      for (unsigned k = 1; k < bins_; ++k) {
        const double target = k * per_bin;
        while (acc_imp + imp[j] < target && j + 1 < bins_) {
          acc_imp += imp[j];
          ++j;
        }
        const double frac = imp[j] > 0 ? std::clamp((target - acc_imp) / imp[j], 0.0, 1.0) : 0.0;
        next[k] = std::max(old[j] + frac * (old[j + 1] - old[j]), next[k - 1]);
      }
      edges_[d] = std::move(next);
    }
  }

 private:
  unsigned bins_;
  std::vector<std::vector<double>> edges_;
};

struct ChunkSums {
  double w = 0, ww = 0;
  std::vector<double> wg, wwg, wwgg;
  std::vector<std::vector<double>> bins;  // [dim][bin]
  std::size_t degenerate = 0;
  std::size_t zero_weight = 0;
};

struct Mapped {
  SampleState state;
  double jac;
  unsigned bin[kDims];
};

// Unit hypercube to the physical domain: VEGAS grid, then tangent maps onto
// the whitened eigenvalue coordinates, the half lines of a, b, c and the real
// lines of d, e, f.
Mapped map_point(const Grid& grid, const detail::Whitening& w, const double* t_scale, Rng& rng) {
  Mapped m;
  m.jac = 1.0;
  double y[kDims];
  for (int d = 0; d < kDims; ++d) m.bin[d] = grid.map(d, uniform01(rng), y[d], m.jac);
  double u[3];
  for (int d = 0; d < 3; ++d) {
    u[d] = std::tan(kPi * (y[d] - 0.5));
    m.jac *= kPi * (1 + u[d] * u[d]);
  }
  m.state.eigen = w.eigen(u);
  double* diag[3] = {&m.state.tri.a, &m.state.tri.b, &m.state.tri.c};
  for (int d = 0; d < 3; ++d) {
    const double s = t_scale[d];
    const double x = std::tan(0.5 * kPi * y[3 + d]);
    *diag[d] = s * x;
    m.jac *= 0.5 * kPi * s * (1 + x * x);
  }
  double* off[3] = {&m.state.tri.d, &m.state.tri.e, &m.state.tri.f};
  for (int d = 0; d < 3; ++d) {
    const double x = std::tan(kPi * (y[6 + d] - 0.5));
    *off[d] = x;
    m.jac *= kPi * (1 + x * x);
  }
  return m;
}

struct EngineResult {
  std::vector<Estimate> channels;
  Estimate normalization;
};

EngineResult run_vegas(const ChannelSet& ch, const IntegrandParams& p, const VegasConfig& cfg) {
  require_supported_N(p.N);
  if (!(p.gamma > 0 && p.gamma < 1)) fail_validation("degenerate-gamma", "gamma must lie strictly inside (0, 1)");
  if (cfg.n_bins < 2) fail_validation("range", "VEGAS needs at least two bins");
  if (cfg.n_iterations < 2 || cfg.n_warmup >= cfg.n_iterations)
    fail_validation("range", "VEGAS needs at least one adaptation and one measurement iteration");
  if (cfg.n_evals_per_iteration < 2 * kChunks) fail_validation("range", "too few evaluations per iteration");

  const detail::Whitening whiten(p.gamma, p.nu_bar);
  const double t_scale[3] = {std::sqrt(std::max(p.N - 2.0, 1.0)), std::sqrt(std::max(p.N - 3.0, 1.0)),
                             std::sqrt(std::max(p.N - 4.0, 1.0))};
  // Whitening Jacobian; the 1/6 restricts the unordered eigenvalue integral to the ordered wedge.
  const double const_jac = whiten.jacobian() / 6.0;
  const std::size_t nc = ch.size;

  Grid grid(cfg.n_bins);
  double steer = 0.0;
  std::vector<std::vector<double>> r_k(nc), var_k(nc);
  std::vector<double> z_k, zvar_k;
  std::size_t degenerate = 0;

  for (unsigned it = 0; it < cfg.n_iterations; ++it) {
    std::vector<ChunkSums> chunks(kChunks);
    parallel_for(kChunks, cfg.threads, [&](std::size_t k) {
      ChunkSums& s = chunks[k];
      s.wg.assign(nc, 0.0);
      s.wwg.assign(nc, 0.0);
      s.wwgg.assign(nc, 0.0);
      s.bins.assign(kDims, std::vector<double>(grid.bins(), 0.0));
      Rng rng(derive_seed(cfg.seed, it, k));
      const std::size_t n = cfg.n_evals_per_iteration / kChunks + (k < cfg.n_evals_per_iteration % kChunks);
      std::vector<double> g(nc);
      for (std::size_t i = 0; i < n; ++i) {
        const Mapped m = map_point(grid, whiten, t_scale, rng);
        const double lw = log_weight(m.state, p);
        if (!std::isfinite(lw) || !std::isfinite(m.jac)) {
          ++s.zero_weight;
          continue;
        }
        const double w = std::exp(lw) * m.jac * const_jac;
        if (!(w > 0)) {
          ++s.zero_weight;
          continue;
        }
        if (!ch.eval(m.state, g.data())) {
          ++s.degenerate;
          std::fill(g.begin(), g.end(), 0.0);
        }
        s.w += w;
        s.ww += w * w;
        for (std::size_t c = 0; c < nc; ++c) {
          const double wg = w * g[c];
          s.wg[c] += wg;
          s.wwg[c] += w * wg;
          s.wwgg[c] += wg * wg;
        }
        const double a = w * (std::abs(g[ch.primary]) + steer);
        for (int d = 0; d < kDims; ++d) s.bins[d][m.bin[d]] += a * a;
      }
    });

    ChunkSums tot;
    tot.wg.assign(nc, 0.0);
    tot.wwg.assign(nc, 0.0);
    tot.wwgg.assign(nc, 0.0);
    tot.bins.assign(kDims, std::vector<double>(grid.bins(), 0.0));
    for (const auto& s : chunks) {
      tot.w += s.w;
      tot.ww += s.ww;
      tot.degenerate += s.degenerate;
      for (std::size_t c = 0; c < nc; ++c) {
        tot.wg[c] += s.wg[c];
        tot.wwg[c] += s.wwg[c];
        tot.wwgg[c] += s.wwgg[c];
      }
      for (int d = 0; d < kDims; ++d)
        for (unsigned b = 0; b < grid.bins(); ++b) tot.bins[d][b] += s.bins[d][b];
    }
    if (!(tot.w > 0)) fail_numerical("all-zero-integrand", "every sample of an iteration had zero weight");

    const double n = static_cast<double>(cfg.n_evals_per_iteration);
    const double mean_w = tot.w / n;
    std::vector<double> ratio(nc);
    for (std::size_t c = 0; c < nc; ++c) ratio[c] = tot.wg[c] / tot.w;
    steer = std::abs(ratio[ch.primary]);

    if (it >= cfg.n_warmup) {
      degenerate += tot.degenerate;
      z_k.push_back(mean_w);
      zvar_k.push_back(std::max(0.0, tot.ww / n - mean_w * mean_w) / (n - 1));
      for (std::size_t c = 0; c < nc; ++c) {
        const double r = ratio[c];
        // Delta method for a ratio of sample means.
        const double m2 = (tot.wwgg[c] - 2 * r * tot.wwg[c] + r * r * tot.ww) / n;
        r_k[c].push_back(r);
        var_k[c].push_back(std::max(0.0, m2) / (mean_w * mean_w) / (n - 1));
      }
    }
    grid.refine(tot.bins, cfg.damping);
  }

  const double K = static_cast<double>(z_k.size());
  auto combine = [&](const std::vector<double>& v, const std::vector<double>& var) {
    Estimate e;
    double sum = 0.0, vs = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      sum += v[i];
      vs += var[i];
    }
    e.value = sum / K;
    e.std_error = std::sqrt(vs) / K;
    e.n_samples = cfg.n_evals_per_iteration * cfg.n_iterations;
    double chi2 = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (var[i] > 0) {
        chi2 += (v[i] - e.value) * (v[i] - e.value) / var[i];
        ++used;
      }
    e.diagnostics.chi2_per_dof = used > 1 ? chi2 / (used - 1) : 0.0;
    e.diagnostics.n_degenerate = degenerate;
    if (e.diagnostics.chi2_per_dof > kChi2Flag) e.diagnostics.flag = "inconsistent-iterations";
    return e;
  };

  EngineResult out;
  for (std::size_t c = 0; c < nc; ++c) out.channels.push_back(combine(r_k[c], var_k[c]));
  out.normalization = combine(z_k, zvar_k);
  return out;
}

}  // namespace

std::vector<Estimate> vegas_expectations(const ChannelSet& ch, const IntegrandParams& p, const VegasConfig& cfg) {
  return run_vegas(ch, p, cfg).channels;
}

Estimate vegas_expectation(const Observable& g, const IntegrandParams& p, const VegasConfig& cfg) {
  ChannelSet ch;
  ch.size = 1;
  ch.eval = [&g](const SampleState& s, double* out) {
    out[0] = g(s);
    return std::isfinite(out[0]);
  };
  return vegas_expectations(ch, p, cfg)[0];
}

Estimate vegas_normalization(const IntegrandParams& p, const VegasConfig& cfg) {
  ChannelSet ch;
  ch.size = 1;
  ch.eval = [](const SampleState&, double* out) {
    out[0] = 1.0;
    return true;
  };
  return run_vegas(ch, p, cfg).normalization;
}

}  // namespace chisq
