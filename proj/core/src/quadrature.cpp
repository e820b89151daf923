#include "chisq/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "chisq/error.hpp"

namespace chisq {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;

struct Segment {
  double a, b, value, error;
  unsigned depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment rule_on(const std::function<double(double)>& g, double a, double b, unsigned depth) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double err = 0.0;
  const double v = Rule::integrate([&](double t) { return g(mid + half * t); }, -1.0, 1.0, 0, 0.0, &err);
  return {a, b, half * v, half * err, depth};
}

// Global adaptive bisection on a finite interval of the (possibly mapped)
// integrand, always splitting the segment with the largest error estimate.
QuadratureResult adapt(const std::function<double(double)>& g, double a, double b,
                       const QuadratureConfig& cfg) {
  std::priority_queue<Segment> heap;
  Segment first = rule_on(g, a, b, 0);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  const std::size_t max_segments = std::size_t{1} << std::min(cfg.max_depth, 20u);
  while (!heap.empty()) {
    if (!std::isfinite(total)) break;
    const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (total_err <= allowed || heap.size() >= max_segments) break;
    Segment s = heap.top();
    if (s.depth >= cfg.max_depth) break;
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    Segment l = rule_on(g, s.a, m, s.depth + 1);
    Segment r = rule_on(g, m, s.b, s.depth + 1);
    total += l.value + r.value - s.value;
    total_err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
  }
  // Recompute the sums from the leaves to shed accumulated rounding.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  return {total, total_err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
  if (a == b) return {0.0, 0.0};
  if (a > b) {
    auto r = integrate(f, b, a, cfg);
    return {-r.value, r.error};
  }
  QuadratureResult r;
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) {
    r = adapt(f, a, b, cfg);
  } else if (!lo_inf) {
    // x = a + t/(1-t)
    r = adapt([&](double t) {
      if (t >= 1.0) return 0.0;
      const double u = 1.0 - t;
      return f(a + t / u) / (u * u);
    }, 0.0, 1.0, cfg);
  } else if (!hi_inf) {
    r = adapt([&](double t) {
      if (t >= 1.0) return 0.0;
      const double u = 1.0 - t;
      return f(b - t / u) / (u * u);
    }, 0.0, 1.0, cfg);
  } else {
    // x = t/(1-t^2)
    r = adapt([&](double t) {
      const double u = 1.0 - t * t;
      if (u <= 0.0) return 0.0;
      return f(t / u) * (1.0 + t * t) / (u * u);
    }, -1.0, 1.0, cfg);
  }
  if (!std::isfinite(r.value)) fail_numerical("divergent-integral", "quadrature produced a non-finite value");
  const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value));
  if (r.error > allowed) {
    std::ostringstream os;
    os << "estimated error " << r.error << " exceeds " << allowed;
    fail_numerical("tolerance-not-met", os.str());
  }
  return r;
}

}  // namespace chisq
