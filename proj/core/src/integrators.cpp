#include <cmath>

#include "chisq/integrators.hpp"

namespace chisq {

ChannelSet suite_channels(const IntegrandParams& p) {
  ChannelSet ch;
  ch.size = 5;
  ch.primary = static_cast<std::size_t>(SuiteChannel::signed_sum);
  const double nu = p.nu_bar, gamma = p.gamma;
  ch.eval = [nu, gamma](const SampleState& s, double* out) {
    for (int i = 0; i < 5; ++i) out[i] = 0.0;
    const Matrix3 h = hessian_proxy(s, nu, gamma);
    const auto cls = classify(h);
    if (!cls) return false;
    const double mag = std::abs(det3(h));
    out[static_cast<std::size_t>(*cls)] = mag;
    out[static_cast<std::size_t>(SuiteChannel::signed_sum)] = signed_weight(*cls) * mag;
    return true;
  };
  return ch;
}

ExpectationSuite expectation_suite(const IntegrandParams& p, const IntegratorConfig& cfg) {
  ChannelSet ch = suite_channels(p);
  std::vector<Estimate> est;
  if (const auto* mh = std::get_if<McConfig>(&cfg)) {
    est = mh_expectations(ch, p, *mh);
  } else {
    // Steer the grid by the total |det H| rather than its signed sum, which
    // cancels between classes.
    ChannelSet steered = ch;
    steered.size = 6;
    steered.primary = 5;
    steered.eval = [inner = ch.eval](const SampleState& s, double* out) {
      const bool ok = inner(s, out);
      out[5] = out[0] + out[1] + out[2] + out[3];
      return ok;
    };
    est = vegas_expectations(steered, p, std::get<VegasConfig>(cfg));
    est.resize(5);
  }
  ExpectationSuite suite;
  for (std::size_t i = 0; i < 5; ++i) suite.channels[i] = std::move(est[i]);
  return suite;
}

}  // namespace chisq
