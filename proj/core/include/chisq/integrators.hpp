#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chisq/integrand.hpp"

namespace chisq {

struct Diagnostics {
  double acceptance_rate = std::numeric_limits<double>::quiet_NaN();  // MH only
  double chi2_per_dof = std::numeric_limits<double>::quiet_NaN();     // VEGAS only
  double r_hat = std::numeric_limits<double>::quiet_NaN();            // MH only
  std::size_t n_degenerate = 0;
  std::string flag;  // empty, "burn-in-not-converged" or "inconsistent-iterations"
};

struct Estimate {
  double value = 0;
  double std_error = 0;
  std::size_t n_samples = 0;
  Diagnostics diagnostics;
};

struct McConfig {
  std::uint64_t seed = 1;
  std::size_t n_samples = 200000;  // summed over chains
  std::size_t n_burn_in = 2000;    // per chain
  // Step sizes for (l1, l2, l3, a, b, c, d, e, f). Unset means the defaults:
  // 0.5 / (1 + gamma nu / 3) for eigenvalues, 0.5 for T.
  std::optional<std::array<double, 9>> proposal_scales;
  unsigned n_chains = 4;
  unsigned n_batches = 16;  // per chain
  unsigned threads = 0;
};

struct VegasConfig {
  std::uint64_t seed = 1;
  unsigned n_iterations = 10;
  std::size_t n_evals_per_iteration = 10000;
  unsigned n_bins = 64;
  double damping = 1.5;
  unsigned n_warmup = 3;  // iterations used only for grid adaptation
  unsigned threads = 0;
};

using IntegratorConfig = std::variant<McConfig, VegasConfig>;

using Observable = std::function<double(const SampleState&)>;

// Several observables evaluated on one sample stream. eval writes `size`
// values and returns false for a degenerate sample, which then contributes
// zero to every channel and is counted in the diagnostics.
struct ChannelSet {
  std::size_t size = 1;
  std::function<bool(const SampleState&, double* out)> eval;
  std::size_t primary = 0;  // channel that steers VEGAS grid adaptation
};

Estimate mh_expectation(const Observable& g, const IntegrandParams& p, const McConfig& cfg);
Estimate vegas_expectation(const Observable& g, const IntegrandParams& p, const VegasConfig& cfg);

std::vector<Estimate> mh_expectations(const ChannelSet& channels, const IntegrandParams& p, const McConfig& cfg);
std::vector<Estimate> vegas_expectations(const ChannelSet& channels, const IntegrandParams& p,
                                         const VegasConfig& cfg);

// Unnormalized weight integral over the ordered wedge; compare with normalization_VN.
Estimate vegas_normalization(const IntegrandParams& p, const VegasConfig& cfg);

enum class SuiteChannel : std::size_t { minimum = 0, saddle1, saddle2, maximum, signed_sum };

struct ExpectationSuite {
  // Indexed by SuiteChannel: |det H| restricted to each class, then det H.
  std::array<Estimate, 5> channels;

  const Estimate& operator[](SuiteChannel c) const { return channels[static_cast<std::size_t>(c)]; }
  const Estimate& operator[](StationaryClass c) const { return channels[static_cast<std::size_t>(c)]; }
};

ChannelSet suite_channels(const IntegrandParams& p);

ExpectationSuite expectation_suite(const IntegrandParams& p, const IntegratorConfig& cfg);

}  // namespace chisq
