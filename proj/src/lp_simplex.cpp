#include "precis/lp_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace precis {

namespace {

class Tableau {
 public:
  Tableau(const Matrix& a, std::span<const double> b, const LpOptions& opts)
      : m_(a.rows()), n_(a.cols()), opts_(opts) {
    for (double v : b) artificial_count_ += v < 0.0 ? 1 : 0;
    cols_ = n_ + m_ + artificial_count_;
    t_ = Matrix(m_, cols_);
    rhs_.resize(m_);
    basis_.resize(m_);
    std::size_t next_art = n_ + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = sign * a(i, j);
      t_(i, n_ + i) = sign;
      rhs_[i] = sign * b[i];
      if (b[i] < 0.0) {
        t_(i, next_art) = 1.0;
        basis_[i] = next_art++;
      } else {
        basis_[i] = n_ + i;
      }
    }
    original_ = t_;
    original_rhs_ = rhs_;
  }

  std::size_t artificial_begin() const { return n_ + m_; }
  std::size_t artificial_count() const { return artificial_count_; }

  /// Returns the status after optimising `cost` over columns < allowed_end.
  LpStatus optimise(const std::vector<double>& cost, std::size_t allowed_end, int& pivots) {
    reduced_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      double acc = cost[j];
      for (std::size_t r = 0; r < m_; ++r) acc -= cost[basis_[r]] * t_(r, j);
      reduced_[j] = acc;
    }
    std::vector<char> in_basis(cols_, 0);
    for (auto bvar : basis_) in_basis[bvar] = 1;

    while (true) {
      if (pivots >= opts_.max_pivots) return LpStatus::iteration_limit;
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < allowed_end; ++j) {
        if (!in_basis[j] && reduced_[j] < -opts_.pivot_eps * 10.0) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return LpStatus::optimal;

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        const double coef = t_(r, entering);
        if (coef <= opts_.pivot_eps) continue;
        const double ratio = std::max(rhs_[r], 0.0) / coef;
        if (leave == m_) {
          best = ratio;
          leave = r;
          continue;
        }
        const double slack = 1e-12 * (1.0 + best);
        if (ratio < best - slack || (ratio <= best + slack && basis_[r] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave == m_) return LpStatus::unbounded;
      in_basis[basis_[leave]] = 0;
      in_basis[entering] = 1;
      pivot(leave, entering);
      ++pivots;
    }
  }

  /// After phase one: replace zero-level artificial basics by structural columns.
  void evict_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < artificial_begin()) continue;
      for (std::size_t j = 0; j < artificial_begin(); ++j) {
        if (std::abs(t_(r, j)) > opts_.pivot_eps * 100.0 &&
            std::find(basis_.begin(), basis_.end(), j) == basis_.end()) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  double basic_value_sum(std::size_t from) const {
    double acc = 0.0;
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] >= from) acc += rhs_[r];
    return acc;
  }

  /// Values of the first n_ variables, recomputed from the original system
  /// for the current basis when that solve is well posed.
  std::vector<double> primal() const {
    std::vector<double> values(rhs_);
    try {
      Matrix basis_cols(m_, m_);
      for (std::size_t r = 0; r < m_; ++r)
        for (std::size_t k = 0; k < m_; ++k) basis_cols(r, k) = original_(r, basis_[k]);
      const Matrix inv = invert_general(basis_cols);
      std::vector<double> refined(m_, 0.0);
      double scale = 1.0;
      for (double v : original_rhs_) scale = std::max(scale, std::abs(v));
      bool ok = true;
      for (std::size_t k = 0; k < m_; ++k) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m_; ++r) acc += inv(k, r) * original_rhs_[r];
        if (!std::isfinite(acc) || acc < -1e-7 * scale) ok = false;
        refined[k] = std::max(acc, 0.0);
      }
      if (ok) values = refined;
    } catch (const std::domain_error&) {
    }
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = std::max(values[r], 0.0);
    return x;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / t_(r, c);
    auto prow = t_.row(r);
    for (auto& v : prow) v *= inv;
    rhs_[r] *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      auto row = t_.row(i);
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
      rhs_[i] -= f * rhs_[r];
    }
    if (!reduced_.empty()) {
      const double f = reduced_[c];
      if (f != 0.0)
        for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= f * prow[j];
      reduced_[c] = 0.0;
    }
    basis_[r] = c;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t artificial_count_ = 0;
  std::size_t cols_ = 0;
  LpOptions opts_;
  Matrix t_;
  Matrix original_;
  std::vector<double> rhs_;
  std::vector<double> original_rhs_;
  std::vector<std::size_t> basis_;
  std::vector<double> reduced_;
};

}  // namespace

LpSolution solve_lp(const Matrix& a, std::span<const double> b, std::span<const double> c,
                    const LpOptions& opts) {
  if (b.size() != a.rows() || c.size() != a.cols())
    throw DimensionMismatch("LP data shapes disagree");
  Tableau tab(a, b, opts);
  LpSolution sol;
  const std::size_t total = a.cols() + a.rows() + tab.artificial_count();

  if (tab.artificial_count() > 0) {
    std::vector<double> phase1(total, 0.0);
    for (std::size_t j = tab.artificial_begin(); j < total; ++j) phase1[j] = 1.0;
    sol.status = tab.optimise(phase1, total, sol.pivots);
    if (sol.status != LpStatus::optimal) return sol;
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    if (tab.basic_value_sum(tab.artificial_begin()) > opts.feasibility_tol * scale) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    tab.evict_artificials();
  }

  std::vector<double> phase2(total, 0.0);
  std::copy(c.begin(), c.end(), phase2.begin());
  sol.status = tab.optimise(phase2, tab.artificial_begin(), sol.pivots);
  if (sol.status != LpStatus::optimal) return sol;
  sol.x = tab.primal();
  sol.objective = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) sol.objective += c[j] * sol.x[j];
  return sol;
}

}  // namespace precis
