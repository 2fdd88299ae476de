#include "precis/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "precis/models.hpp"

namespace precis {

std::vector<PairIndex> support_pairs(const SupportSet& support) {
  const std::size_t p = support.dim();
  std::vector<PairIndex> out;
  out.reserve(p + 2 * support.size());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (support.contains(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<PairIndex> complement_pairs(const SupportSet& support) {
  const std::size_t p = support.dim();
  std::vector<PairIndex> out;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (!support.contains(i, j)) out.emplace_back(i, j);
  return out;
}

namespace {

/// || cross * block^{-1} || under `axis`, with block symmetric PD.
/// Works on the transpose: block^{-1} cross^T via one Cholesky factorisation.
double irrepresentability_norm(const Matrix& cross, const SymMatrix& block, NormAxis axis) {
  const Matrix lower = cholesky(block);
  const std::size_t rows = cross.rows();
  const std::size_t cols = cross.cols();
  std::vector<double> col_sums(cols, 0.0);
  double best_row = 0.0;
  std::vector<double> work(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto src = cross.row(r);
    std::copy(src.begin(), src.end(), work.begin());
    cholesky_solve(lower, work);  // row r of cross * block^{-1}
    double row_sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      col_sums[c] += std::abs(work[c]);
      row_sum += std::abs(work[c]);
    }
    best_row = std::max(best_row, row_sum);
  }
  if (axis == NormAxis::rows) return best_row;
  return col_sums.empty() ? 0.0 : *std::max_element(col_sums.begin(), col_sums.end());
}

}  // namespace

double assumption1_gamma(const SymMatrix& precision, const SupportSet& support, NormAxis axis) {
  if (support.dim() != precision.dim()) throw DimensionMismatch("support and precision differ in size");
  const SymMatrix sigma = invert(precision);
  const auto in = support_pairs(support);
  const auto out = complement_pairs(support);
  if (out.empty()) return 0.0;
  const SymMatrix block = SymMatrix::symmetrized(kron_subblock(sigma, in, in));
  const Matrix cross = kron_subblock(sigma, out, in);
  try {
    return irrepresentability_norm(cross, block, axis);
  } catch (const NotPositiveDefinite& e) {
    throw SingularGamma(std::string("Gamma_SS is not invertible: ") + e.what());
  }
}

double assumption2_gamma(const SymMatrix& covariance, const SymMatrix& precision, NormAxis axis) {
  const std::size_t p = precision.dim();
  if (covariance.dim() != p) throw DimensionMismatch("covariance and precision differ in size");
  double worst = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<std::size_t> in, out;
    for (std::size_t j = 0; j < p; ++j) (precision(i, j) != 0.0 ? in : out).push_back(j);
    if (out.empty() || in.empty()) continue;
    SymMatrix block(in.size());
    for (std::size_t a = 0; a < in.size(); ++a)
      for (std::size_t b = a; b < in.size(); ++b) block.set(a, b, covariance(in[a], in[b]));
    Matrix cross(out.size(), in.size());
    for (std::size_t a = 0; a < out.size(); ++a)
      for (std::size_t b = 0; b < in.size(); ++b) cross(a, b) = covariance(out[a], in[b]);
    try {
      worst = std::max(worst, irrepresentability_norm(cross, block, axis));
    } catch (const NotPositiveDefinite& e) {
      throw SingularBlock("covariance block for row " + std::to_string(i) + " is singular");
    }
  }
  return worst;
}

std::string ConsistencyReport::csv_header() {
  return "p,support_size,gamma1,gamma2,satisfied1,satisfied2";
}

std::string ConsistencyReport::csv_row() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%.10g,%d,%d", dim, support_size, gamma1, gamma2,
                satisfied1 ? 1 : 0, satisfied2 ? 1 : 0);
  return buf;
}

ConsistencyReport consistency_report(const SymMatrix& covariance, const SymMatrix& precision,
                                     const SupportSet& support, NormAxis axis) {
  ConsistencyReport r;
  r.dim = precision.dim();
  r.support_size = support.size();
  r.gamma1 = assumption1_gamma(precision, support, axis);
  r.gamma2 = assumption2_gamma(covariance, precision, axis);
  r.satisfied1 = r.gamma1 < 1.0;
  r.satisfied2 = r.gamma2 < 1.0;
  return r;
}

ObjectiveBreakdown glasso_objective(const SymMatrix& omega, const SymMatrix& s, double lambda,
                                    bool penalize_diagonal) {
  if (omega.dim() != s.dim()) throw DimensionMismatch("omega and S differ in size");
  ObjectiveBreakdown b;
  b.log_det_term = log_det(omega);
  double tr = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) tr += omega(i, j) * s(j, i);
  b.neg_trace_term = -tr;
  b.penalty_term = lambda * (penalize_diagonal ? norm_l1_all(omega) : norm_l1_offdiag(omega));
  b.total = b.log_det_term + b.neg_trace_term - b.penalty_term;
  return b;
}

bool trace_bound_check(const SymMatrix& c, const SymMatrix& omega) {
  double tr = 0.0;
  for (std::size_t i = 0; i < c.dim(); ++i)
    for (std::size_t j = 0; j < c.dim(); ++j) tr += c(i, j) * omega(j, i);
  return tr <= norm_l1_all(omega) + 1e-10;
}

double latent_log_det_precision(const LatentModelSpec& spec) {
  return -static_cast<double>(spec.d1 + spec.d2) * std::log(spec.sigma_x2) -
         static_cast<double>(spec.d2) * std::log(spec.sigma_eps2);
}

double latent_penalty_lower_bound(const LatentModelSpec& spec, double lambda) {
  double a1 = 0.0;
  for (double v : spec.A.data()) a1 += std::abs(v);
  return lambda / spec.sigma_eps2 * (static_cast<double>(spec.d2) + 2.0 * a1);
}

}  // namespace precis
