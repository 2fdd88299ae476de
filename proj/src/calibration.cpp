#include <algorithm>
#include <cmath>
#include <optional>

#include "precis/estimators.hpp"

namespace precis {

namespace {

struct Probe {
  double lambda;
  EstimateResult result;
  std::size_t count() const { return result.support.size(); }
};

// Exact hits win (largest lambda); otherwise the nearest count, overshoot
// before undershoot, then the larger lambda.
bool better(const Probe& a, const Probe& b, std::size_t want) {
  const auto dist = [want](std::size_t c) { return c > want ? c - want : want - c; };
  const std::size_t da = dist(a.count());
  const std::size_t db = dist(b.count());
  if (da != db) return da < db;
  const bool over_a = a.count() >= want;
  const bool over_b = b.count() >= want;
  if (over_a != over_b) return over_a;
  return a.lambda > b.lambda;
}

}  // namespace

EstimateResult calibrate_lambda(Method method, const SymMatrix& s, std::size_t target_edges,
                                const CalibrationConfig& cfg) {
  const std::size_t max_pairs = SupportSet::max_pairs(s.dim());
  const bool clamped = target_edges > max_pairs;
  const std::size_t want = std::min(target_edges, max_pairs);

  if (method == Method::naive) {
    EstimateResult r = naive(s, want);
    r.target_clamped = clamped;
    r.calibrated = !clamped;
    return r;
  }

  double max_off = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = i + 1; j < s.dim(); ++j) max_off = std::max(max_off, std::abs(s(i, j)));
  const double lo0 = cfg.lambda_lo;
  double hi0 = std::max(cfg.lambda_hi_factor * max_off, 10.0 * lo0);

  std::optional<Probe> best;
  const auto run = [&](double lambda) -> std::size_t {
    EstimatorConfig ec = cfg.base;
    ec.lambda = lambda;
    Probe probe{lambda, estimate(method, s, ec)};
    const std::size_t count = probe.count();
    if (!best || better(probe, *best, want)) best = std::move(probe);
    return count;
  };

  std::size_t count_hi = run(hi0);
  for (int grow = 0; grow < 10 && count_hi > want; ++grow) {
    hi0 *= 2.0;
    count_hi = run(hi0);
  }
  const std::size_t count_lo = run(lo0);

  if (count_lo >= want && count_hi <= want && best->count() != want) {
    // Geometric bisection keeping count(lo) >= want > count(hi).
    double lo = lo0;
    double hi = hi0;
    for (int step = 0; step < cfg.bisection_steps && hi / lo > 1.0 + 1e-10; ++step) {
      const double mid = std::sqrt(lo * hi);
      if (run(mid) >= want)
        lo = mid;
      else
        hi = mid;
    }
  } else if (best->count() == want && count_lo >= want) {
    // Target already hit; push lambda up to the largest value that keeps it.
    double lo = best->lambda;
    double hi = hi0;
    for (int step = 0; step < cfg.bisection_steps && hi / lo > 1.0 + 1e-10; ++step) {
      const double mid = std::sqrt(lo * hi);
      if (run(mid) >= want)
        lo = mid;
      else
        hi = mid;
    }
  }

  if (best->count() != want && cfg.dense_sweep_points > 1) {
    // Edge counts were not monotone enough for bisection to land on the target.
    const double ratio = std::log(hi0 / lo0);
    for (int k = 0; k < cfg.dense_sweep_points; ++k) {
      const double t = static_cast<double>(k) / (cfg.dense_sweep_points - 1);
      run(lo0 * std::exp(ratio * t));
      if (best->count() == want) break;
    }
  }

  EstimateResult result = std::move(best->result);
  result.lambda_used = best->lambda;
  result.target_clamped = clamped;
  result.calibrated = !clamped && result.support.size() == want;
  return result;
}

}  // namespace precis
