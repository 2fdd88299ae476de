#include "precis/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "precis/lp_simplex.hpp"

namespace precis {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::glasso: return "glasso";
    case Method::clime: return "clime";
    case Method::scio: return "scio";
    case Method::naive: return "naive";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::glasso, Method::clime, Method::scio, Method::naive})
    if (method_name(m) == name) return m;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

void EstimatorConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(tol > 0.0) || !(cd_tol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
  if (max_iter < 1 || cd_max_sweeps < 1) throw std::invalid_argument("iteration caps must be >= 1");
}

namespace {

double mean_abs_offdiag(const SymMatrix& s) {
  const std::size_t p = s.dim();
  if (p < 2) return 0.0;
  return norm_l1_offdiag(s) / static_cast<double>(p * (p - 1));
}

double lasso_objective(const Matrix& q, std::span<const double> target, double lambda,
                       std::span<const std::size_t> idx, std::span<const double> beta) {
  double quad = 0.0, lin = 0.0, pen = 0.0;
  for (std::size_t a : idx) {
    if (beta[a] == 0.0) continue;
    double row = 0.0;
    for (std::size_t b : idx) row += q(a, b) * beta[b];
    quad += beta[a] * row;
    lin += target[a] * beta[a];
    pen += std::abs(beta[a]);
  }
  return 0.5 * quad - lin + lambda * pen;
}

/// Feature-sign search started from the coordinate-descent iterate: solve on
/// the current nonzero set with signs fixed, step back to the best zero
/// crossing when a sign flips, and add the worst inactive KKT violator when
/// the restricted solution is sign-consistent. Returns true once the full
/// optimality conditions hold; beta and grad then hold the exact optimum.
bool polish_active_set(const Matrix& q, std::span<const double> target, double lambda,
                       std::span<const std::size_t> active, std::span<double> beta,
                       std::span<double> grad) {
  const std::size_t n = q.rows();
  std::vector<double> x(beta.begin(), beta.end());
  std::vector<double> sign(n, 0.0);
  for (std::size_t k : active) sign[k] = x[k] > 0.0 ? 1.0 : (x[k] < 0.0 ? -1.0 : 0.0);

  const auto gradient_of = [&](const std::vector<double>& v) {
    std::vector<double> g(n, 0.0);
    for (std::size_t k : active) {
      if (v[k] == 0.0) continue;
      auto qrow = q.row(k);
      for (std::size_t l = 0; l < n; ++l) g[l] += qrow[l] * v[k];
    }
    return g;
  };

  const int max_steps = 4 * static_cast<int>(active.size()) + 10;
  for (int step = 0; step < max_steps; ++step) {
    std::vector<std::size_t> set;
    for (std::size_t k : active)
      if (sign[k] != 0.0) set.push_back(k);

    if (!set.empty()) {
      SymMatrix sub(set.size());
      std::vector<double> sol(set.size());
      for (std::size_t a = 0; a < set.size(); ++a) {
        for (std::size_t b = a; b < set.size(); ++b) sub.set(a, b, q(set[a], set[b]));
        sol[a] = target[set[a]] - lambda * sign[set[a]];
      }
      try {
        cholesky_solve(cholesky(sub), sol);
      } catch (const NotPositiveDefinite&) {
        return false;
      }
      bool consistent = true;
      for (std::size_t a = 0; a < set.size(); ++a)
        if (!(sol[a] * sign[set[a]] > 0.0)) consistent = false;

      std::vector<double> candidate(x);
      for (std::size_t a = 0; a < set.size(); ++a) candidate[set[a]] = sol[a];
      if (!consistent) {
        // best point among the target and the zero crossings on the segment
        double best_obj = lasso_objective(q, target, lambda, active, candidate);
        std::vector<double> best = candidate;
        for (std::size_t a = 0; a < set.size(); ++a) {
          const std::size_t k = set[a];
          if (x[k] == 0.0 || sol[a] * x[k] > 0.0) continue;
          const double t = x[k] / (x[k] - sol[a]);
          std::vector<double> mid(x);
          for (std::size_t c = 0; c < set.size(); ++c)
            mid[set[c]] = x[set[c]] + t * (sol[c] - x[set[c]]);
          mid[k] = 0.0;
          const double obj = lasso_objective(q, target, lambda, active, mid);
          if (obj < best_obj) {
            best_obj = obj;
            best = std::move(mid);
          }
        }
        x = std::move(best);
        for (std::size_t k : active) sign[k] = x[k] > 0.0 ? 1.0 : (x[k] < 0.0 ? -1.0 : 0.0);
        continue;
      }
      x = std::move(candidate);
    }

    const auto g = gradient_of(x);
    std::size_t worst = n;
    double worst_excess = 0.0;
    for (std::size_t k : active) {
      if (x[k] != 0.0) continue;
      const double excess = std::abs(target[k] - g[k]) - lambda * (1.0 + 1e-12);
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = k;
      }
    }
    if (worst == n) {
      std::copy(x.begin(), x.end(), beta.begin());
      std::copy(g.begin(), g.end(), grad.begin());
      return true;
    }
    sign[worst] = target[worst] - g[worst] > 0.0 ? 1.0 : -1.0;
  }
  return false;
}

/// Cyclic coordinate descent for min 1/2 b^T Q b - t^T b + lambda ||b||_1
/// restricted to the coordinates in `active` (all others stay 0).
/// `grad` holds Q b on entry and is kept in sync. Returns sweeps used, or -1
/// when the sweep cap was hit.
int lasso_cd(const Matrix& q, std::span<const double> target, double lambda,
             std::span<const std::size_t> active, std::span<double> beta, std::span<double> grad,
             int max_sweeps, double tol) {
  constexpr int kPolishEvery = 25;
  const std::size_t n = q.rows();
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double max_step = 0.0;
    double max_beta = 0.0;
    for (std::size_t k : active) {
      const double qkk = q(k, k);
      const double old = beta[k];
      const double partial = target[k] - (grad[k] - qkk * old);
      const double updated = soft_threshold(partial, lambda) / qkk;
      if (updated != old) {
        const double delta = updated - old;
        auto qrow = q.row(k);
        for (std::size_t l = 0; l < n; ++l) grad[l] += qrow[l] * delta;
        beta[k] = updated;
        max_step = std::max(max_step, std::abs(delta));
      }
      max_beta = std::max(max_beta, std::abs(updated));
    }
    if (max_step <= tol * (1.0 + max_beta)) return sweep;
    if (sweep % kPolishEvery == 0 && polish_active_set(q, target, lambda, active, beta, grad))
      return sweep;
  }
  return -1;
}

}  // namespace

EstimateResult glasso(const SymMatrix& s, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t p = s.dim();
  const double lambda = cfg.lambda;
  EstimateResult out;
  out.lambda_used = lambda;

  if (lambda == 0.0) {
    out.omega = invert(s);  // NotPositiveDefinite for singular S
    out.support = SupportSet::from_matrix(out.omega, kSupportEpsilon);
    out.objective = glasso_objective(out.omega, s, lambda, cfg.penalize_diagonal);
    return out;
  }

  const double diag_shift = cfg.penalize_diagonal ? lambda : 0.0;
  for (std::size_t i = 0; i < p; ++i)
    if (!(s(i, i) + diag_shift > 0.0))
      throw NotPositiveDefinite("glasso needs a positive working diagonal");

  // Working covariance W; column j of `coef` is the lasso solution for block j,
  // indexed over all p coordinates with coef(j, j) unused.
  Matrix w = s.dense();
  for (std::size_t i = 0; i < p; ++i) w(i, i) += diag_shift;
  Matrix coef(p, p);

  const double mean_off = mean_abs_offdiag(s);
  const double threshold = cfg.tol * (mean_off > 0.0 ? mean_off : 1.0);

  std::vector<double> beta(p), grad(p), target(p);
  std::vector<std::size_t> active;
  active.reserve(p);
  out.converged = false;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      active.clear();
      for (std::size_t k = 0; k < p; ++k)
        if (k != j) active.push_back(k);
      for (std::size_t k = 0; k < p; ++k) {
        beta[k] = k == j ? 0.0 : coef(k, j);
        target[k] = k == j ? 0.0 : s(k, j);
      }
      for (std::size_t k = 0; k < p; ++k) {
        double acc = 0.0;
        if (k != j)
          for (std::size_t l : active) acc += w(k, l) * beta[l];
        grad[k] = acc;
      }
      // W with row/column j zeroed acts as W11 on the active coordinates.
      const double wjj = w(j, j);
      std::vector<double> saved_row(w.row(j).begin(), w.row(j).end());
      for (std::size_t k = 0; k < p; ++k) {
        w(j, k) = 0.0;
        w(k, j) = 0.0;
      }
      w(j, j) = 1.0;
      lasso_cd(w, target, lambda, active, beta, grad, cfg.cd_max_sweeps, cfg.cd_tol);
      w(j, j) = wjj;
      for (std::size_t k = 0; k < p; ++k) {
        if (k == j) continue;
        max_change = std::max(max_change, std::abs(grad[k] - saved_row[k]));
        w(j, k) = grad[k];
        w(k, j) = grad[k];
        coef(k, j) = beta[k];
      }
    }
    out.iterations = iter;
    if (max_change < threshold) {
      out.converged = true;
      break;
    }
  }

  Matrix raw(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    double dot = 0.0;
    for (std::size_t k = 0; k < p; ++k)
      if (k != j) dot += w(k, j) * coef(k, j);
    const double ojj = 1.0 / (w(j, j) - dot);
    raw(j, j) = ojj;
    for (std::size_t k = 0; k < p; ++k)
      if (k != j) raw(k, j) = -coef(k, j) * ojj;
  }
  out.omega = SymMatrix::symmetrized(raw);
  out.support = SupportSet::from_matrix(out.omega, kSupportEpsilon);
  try {
    out.objective = glasso_objective(out.omega, s, lambda, cfg.penalize_diagonal);
  } catch (const NotPositiveDefinite&) {
    out.converged = false;
  }
  return out;
}

SymMatrix min_magnitude_symmetrize(const Matrix& raw) {
  const std::size_t p = raw.rows();
  SymMatrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out.set(i, i, raw(i, i));
    for (std::size_t j = i + 1; j < p; ++j) {
      const double a = raw(i, j);
      const double b = raw(j, i);
      out.set(i, j, std::abs(b) < std::abs(a) ? b : a);
    }
  }
  return out;
}

EstimateResult scio(const SymMatrix& s, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t p = s.dim();
  for (std::size_t i = 0; i < p; ++i)
    if (!(s(i, i) > 0.0)) throw NotPositiveDefinite("scio needs a positive diagonal");

  EstimateResult out;
  out.lambda_used = cfg.lambda;
  out.raw_columns = Matrix(p, p);
  std::vector<std::size_t> all(p);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<double> beta(p), grad(p), target(p);
  for (std::size_t i = 0; i < p; ++i) {
    std::fill(beta.begin(), beta.end(), 0.0);
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(target.begin(), target.end(), 0.0);
    target[i] = 1.0;
    const int sweeps =
        lasso_cd(s.dense(), target, cfg.lambda, all, beta, grad, cfg.cd_max_sweeps, cfg.cd_tol);
    if (sweeps < 0) out.converged = false;
    out.iterations = std::max(out.iterations, sweeps < 0 ? cfg.cd_max_sweeps : sweeps);
    for (std::size_t k = 0; k < p; ++k) out.raw_columns(k, i) = beta[k];
  }
  out.omega = min_magnitude_symmetrize(out.raw_columns);
  out.support = SupportSet::from_matrix(out.omega, kSupportEpsilon);
  return out;
}

EstimateResult clime(const SymMatrix& s, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t p = s.dim();
  const double lambda = cfg.lambda;

  // beta = u - v with u, v >= 0:  S u - S v <= lambda + e_i,  -S u + S v <= lambda - e_i
  Matrix a(2 * p, 2 * p);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t k = 0; k < p; ++k) {
      a(r, k) = s(r, k);
      a(r, p + k) = -s(r, k);
      a(p + r, k) = -s(r, k);
      a(p + r, p + k) = s(r, k);
    }
  }
  const std::vector<double> cost(2 * p, 1.0);
  std::vector<double> rhs(2 * p);

  EstimateResult out;
  out.lambda_used = lambda;
  out.raw_columns = Matrix(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t r = 0; r < p; ++r) {
      const double unit = r == i ? 1.0 : 0.0;
      rhs[r] = lambda + unit;
      rhs[p + r] = lambda - unit;
    }
    const LpSolution sol = solve_lp(a, rhs, cost);
    switch (sol.status) {
      case LpStatus::optimal: break;
      case LpStatus::infeasible:
        throw Infeasible("CLIME column " + std::to_string(i) + " infeasible at lambda " +
                         std::to_string(lambda));
      default:
        throw LpNumericalFailure("CLIME column " + std::to_string(i) + " LP did not terminate");
    }
    out.iterations += sol.pivots;
    for (std::size_t k = 0; k < p; ++k) out.raw_columns(k, i) = sol.x[k] - sol.x[p + k];
  }
  out.omega = min_magnitude_symmetrize(out.raw_columns);
  out.support = SupportSet::from_matrix(out.omega, kSupportEpsilon);
  return out;
}

EstimateResult naive(const SymMatrix& s, std::size_t target_edges) {
  const std::size_t p = s.dim();
  const SymMatrix inv = invert(s);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(SupportSet::max_pairs(p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    return std::abs(inv(x.first, x.second)) > std::abs(inv(y.first, y.second));
  });

  EstimateResult out;
  out.target_clamped = target_edges > pairs.size();
  out.calibrated = !out.target_clamped;
  const std::size_t keep = std::min(target_edges, pairs.size());
  out.omega = SymMatrix(p);
  out.support = SupportSet(p);
  for (std::size_t i = 0; i < p; ++i) out.omega.set(i, i, inv(i, i));
  for (std::size_t k = 0; k < keep; ++k) {
    const auto [i, j] = pairs[k];
    out.omega.set(i, j, inv(i, j));
    out.support.insert(i, j);
  }
  return out;
}

EstimateResult estimate(Method method, const SymMatrix& s, const EstimatorConfig& cfg) {
  switch (method) {
    case Method::glasso: return glasso(s, cfg);
    case Method::clime: return clime(s, cfg);
    case Method::scio: return scio(s, cfg);
    case Method::naive: return naive(s, SupportSet::max_pairs(s.dim()));
  }
  throw std::invalid_argument("unknown method");
}

double glasso_kkt_violation(const SymMatrix& omega, const SymMatrix& s, double lambda,
                            bool penalize_diagonal, double zero_eps) {
  const SymMatrix w = invert(omega);
  const std::size_t p = s.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      const double g = w(i, j) - s(i, j);
      const double o = omega(i, j);
      double v = 0.0;
      if (i == j && !penalize_diagonal) {
        v = std::abs(g);
      } else if (std::abs(o) <= zero_eps) {
        v = std::max(0.0, std::abs(g) - lambda);
      } else {
        v = std::abs(g - lambda * (o > 0.0 ? 1.0 : -1.0));
      }
      worst = std::max(worst, v);
    }
  }
  return worst;
}

double scio_kkt_violation(const Matrix& raw, const SymMatrix& s, double lambda) {
  const std::size_t p = s.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double r = j == i ? -1.0 : 0.0;
      for (std::size_t k = 0; k < p; ++k) r += s(j, k) * raw(k, i);
      const double b = raw(j, i);
      const double v = b == 0.0 ? std::max(0.0, std::abs(r) - lambda)
                                : std::abs(r + lambda * (b > 0.0 ? 1.0 : -1.0));
      worst = std::max(worst, v);
    }
  }
  return worst;
}

double clime_constraint_residual(const Matrix& raw, const SymMatrix& s) {
  const std::size_t p = s.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double r = j == i ? -1.0 : 0.0;
      for (std::size_t k = 0; k < p; ++k) r += s(j, k) * raw(k, i);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

}  // namespace precis
