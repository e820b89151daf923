#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chisq/closedform.hpp"
#include "chisq/error.hpp"
#include "chisq/integrators.hpp"
#include "chisq/parallel.hpp"
#include "sampling.hpp"

namespace chisq {

namespace {

struct ChainResult {
  std::vector<std::vector<double>> batch_means;  // [channel][batch]
  std::vector<double> mean;                      // per channel
  std::vector<double> variance;                  // per channel, within-chain
  std::size_t accepted = 0;
  std::size_t proposed = 0;
  std::size_t degenerate = 0;
};

std::array<double, 9> default_scales(const IntegrandParams& p) {
  const double sl = 0.5 / (1 + p.gamma * p.nu_bar / 3);
  return {sl, sl, sl, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
}

// Overdispersed start drawn around the Gaussian core of the weight.
SampleState initial_state(const IntegrandParams& p, Rng& rng) {
  const detail::Whitening w(p.gamma, p.nu_bar);
  double u[3];
  for (double& x : u) x = 1.5 * standard_normal(rng);
  SampleState s;
  s.eigen = w.eigen(u);
  s.tri.a = std::sqrt(std::max(p.N - 2.0, 1.0)) * (1 + 0.3 * std::abs(standard_normal(rng)));
  s.tri.b = std::sqrt(std::max(p.N - 3.0, 1.0)) * (1 + 0.3 * std::abs(standard_normal(rng)));
  s.tri.c = std::sqrt(std::max(p.N - 4.0, 1.0)) * (1 + 0.3 * std::abs(standard_normal(rng)));
  s.tri.d = 1.5 * standard_normal(rng);
  s.tri.e = 1.5 * standard_normal(rng);
  s.tri.f = 1.5 * standard_normal(rng);
  return s;
}

SampleState propose(const SampleState& s, const std::array<double, 9>& scale, Rng& rng) {
  double z[9];
  for (double& x : z) x = standard_normal(rng);
  SampleState t;
  t.eigen = EigenTriple(s.eigen.l1() + scale[0] * z[0], s.eigen.l2() + scale[1] * z[1],
                        s.eigen.l3() + scale[2] * z[2]);
  t.tri.a = std::abs(s.tri.a + scale[3] * z[3]);
  t.tri.b = std::abs(s.tri.b + scale[4] * z[4]);
  t.tri.c = std::abs(s.tri.c + scale[5] * z[5]);
  t.tri.d = s.tri.d + scale[6] * z[6];
  t.tri.e = s.tri.e + scale[7] * z[7];
  t.tri.f = s.tri.f + scale[8] * z[8];
  return t;
}

ChainResult run_chain(const ChannelSet& ch, const IntegrandParams& p, const McConfig& cfg,
                      const std::array<double, 9>& scale, std::size_t chain, std::size_t n_keep) {
  Rng rng(derive_seed(cfg.seed, chain));
  SampleState s = initial_state(p, rng);
  double lw = log_weight(s, p);
  for (int tries = 0; !std::isfinite(lw) && tries < 1000; ++tries) {
    s = initial_state(p, rng);
    lw = log_weight(s, p);
  }
  if (!std::isfinite(lw)) fail_numerical("zero-acceptance", "no start state with positive weight");

  const std::size_t nc = ch.size;
  std::vector<double> values(nc);
  bool ok = ch.eval(s, values.data());
  if (!ok) std::fill(values.begin(), values.end(), 0.0);

  ChainResult out;
  out.batch_means.assign(nc, std::vector<double>(cfg.n_batches, 0.0));
  out.mean.assign(nc, 0.0);
  out.variance.assign(nc, 0.0);
  std::vector<double> sum_sq(nc, 0.0);

  const std::size_t total = cfg.n_burn_in + n_keep;
  const std::size_t batch_len = n_keep / cfg.n_batches;
  for (std::size_t step = 0; step < total; ++step) {
    SampleState t = propose(s, scale, rng);
    const double lt = log_weight(t, p);
    const double log_u = std::log(uniform01(rng));
    ++out.proposed;
    if (std::isfinite(lt) && log_u < lt - lw) {
      s = t;
      lw = lt;
      ++out.accepted;
      ok = ch.eval(s, values.data());
      if (!ok) std::fill(values.begin(), values.end(), 0.0);
    }
    if (step < cfg.n_burn_in) continue;
    const std::size_t k = step - cfg.n_burn_in;
    out.degenerate += !ok;
    const std::size_t batch = std::min<std::size_t>(k / batch_len, cfg.n_batches - 1);
    for (std::size_t c = 0; c < nc; ++c) {
      out.mean[c] += values[c];
      sum_sq[c] += values[c] * values[c];
      out.batch_means[c][batch] += values[c];
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (unsigned b = 0; b < cfg.n_batches; ++b) {
      const std::size_t len = b + 1 < cfg.n_batches ? batch_len : n_keep - batch_len * (cfg.n_batches - 1);
      out.batch_means[c][b] /= static_cast<double>(len);
    }
    out.mean[c] /= static_cast<double>(n_keep);
    out.variance[c] = std::max(0.0, sum_sq[c] / n_keep - out.mean[c] * out.mean[c]) * n_keep / (n_keep - 1.0);
  }
  return out;
}

}  // namespace

std::vector<Estimate> mh_expectations(const ChannelSet& ch, const IntegrandParams& p, const McConfig& cfg) {
  require_supported_N(p.N);
  if (cfg.n_chains < 2) fail_validation("range", "MH needs at least two chains");
  if (cfg.n_batches < 2) fail_validation("range", "MH needs at least two batches");
  const std::size_t per_chain = cfg.n_samples / cfg.n_chains;
  if (per_chain < 2 * cfg.n_batches) fail_validation("range", "too few samples per chain for batch means");
  const auto scale = cfg.proposal_scales.value_or(default_scales(p));
  for (double s : scale)
    if (!(s > 0)) fail_validation("range", "proposal scales must be positive");

  std::vector<ChainResult> chains(cfg.n_chains);
  parallel_for(cfg.n_chains, cfg.threads,
               [&](std::size_t i) { chains[i] = run_chain(ch, p, cfg, scale, i, per_chain); });

  std::size_t accepted = 0, proposed = 0, degenerate = 0;
  for (const auto& c : chains) {
    accepted += c.accepted;
    proposed += c.proposed;
    degenerate += c.degenerate;
  }
  if (accepted == 0) fail_numerical("zero-acceptance", "no proposal was accepted; proposal scales are pathological");

  const double m = cfg.n_chains;
  const double nb = static_cast<double>(cfg.n_chains) * cfg.n_batches;
  std::vector<Estimate> out(ch.size);
  double worst_rhat = 1.0;
  for (std::size_t c = 0; c < ch.size; ++c) {
    double mean = 0.0;
    for (const auto& r : chains) mean += r.mean[c];
    mean /= m;
    double var_b = 0.0;
    for (const auto& r : chains)
      for (double bm : r.batch_means[c]) var_b += (bm - mean) * (bm - mean);
    var_b /= (nb - 1);

    // Gelman-Rubin on chain means.
    double between = 0.0, within = 0.0;
    for (const auto& r : chains) {
      between += (r.mean[c] - mean) * (r.mean[c] - mean);
      within += r.variance[c];
    }
    between = between * per_chain / (m - 1);
    within /= m;
    double rhat = 1.0;
    if (within > 0) {
      const double n = static_cast<double>(per_chain);
      rhat = std::sqrt(((n - 1) / n * within + between / n) / within);
    }
    worst_rhat = std::max(worst_rhat, rhat);

    out[c].value = mean;
    out[c].std_error = std::sqrt(var_b / nb);
    out[c].n_samples = per_chain * cfg.n_chains;
    out[c].diagnostics.r_hat = rhat;
  }
  for (auto& e : out) {
    e.diagnostics.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposed);
    e.diagnostics.n_degenerate = degenerate;
    if (worst_rhat > 1.1) e.diagnostics.flag = "burn-in-not-converged";
  }
  return out;
}

Estimate mh_expectation(const Observable& g, const IntegrandParams& p, const McConfig& cfg) {
  ChannelSet ch;
  ch.size = 1;
  ch.eval = [&g](const SampleState& s, double* out) {
    out[0] = g(s);
    return std::isfinite(out[0]);
  };
  return mh_expectations(ch, p, cfg)[0];
}

}  // namespace chisq
