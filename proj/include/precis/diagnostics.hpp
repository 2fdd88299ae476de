#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "precis/matops.hpp"

namespace precis {

struct LatentModelSpec;

class SingularGamma : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularBlock : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which absolute sums the infinity norm maximises over. `columns` is
/// max_j sum_i |a_ij|, the form used throughout this library.
enum class NormAxis { columns, rows };

/// Ordered pairs (i, i) and (i, j), (j, i) for each support edge, sorted by i * p + j.
std::vector<PairIndex> support_pairs(const SupportSet& support);
/// Ordered pairs not in support_pairs(support), sorted by i * p + j.
std::vector<PairIndex> complement_pairs(const SupportSet& support);

/// || Gamma_{S^c S} Gamma_{SS}^{-1} || with Gamma = Sigma (x) Sigma and
/// Sigma = precision^{-1}; blocks are built without forming Gamma.
double assumption1_gamma(const SymMatrix& precision, const SupportSet& support,
                         NormAxis axis = NormAxis::columns);

/// max_i || Sigma_{s_i^c s_i} Sigma_{s_i s_i}^{-1} || with s_i the nonzero
/// positions of row i of the precision.
double assumption2_gamma(const SymMatrix& covariance, const SymMatrix& precision,
                         NormAxis axis = NormAxis::columns);

struct ConsistencyReport {
  std::size_t dim = 0;
  std::size_t support_size = 0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  bool satisfied1 = false;
  bool satisfied2 = false;

  static std::string csv_header();
  std::string csv_row() const;
};

ConsistencyReport consistency_report(const SymMatrix& covariance, const SymMatrix& precision,
                                     const SupportSet& support, NormAxis axis = NormAxis::columns);

/// Terms of log det(Omega) - tr(Omega S) - lambda ||Omega||_1.
struct ObjectiveBreakdown {
  double log_det_term = 0.0;
  double neg_trace_term = 0.0;
  double penalty_term = 0.0;  // lambda ||Omega||_1, stored positive
  double total = 0.0;
};

ObjectiveBreakdown glasso_objective(const SymMatrix& omega, const SymMatrix& s, double lambda,
                                    bool penalize_diagonal);

/// trace(C Omega) <= ||Omega||_1 + 1e-10. Meaningful when max |C_ij| <= 1.
bool trace_bound_check(const SymMatrix& c, const SymMatrix& omega);

/// log det of the latent-model precision: -(d1 + d2) log sigma_x2 - d2 log sigma_eps2.
double latent_log_det_precision(const LatentModelSpec& spec);

/// lambda * sigma_eps^{-2} (d2 + 2 ||A||_1): strict lower bound on the
/// penalty lambda ||C^{-1}||_1 of the latent truth when sigma_x2 = 1.
double latent_penalty_lower_bound(const LatentModelSpec& spec, double lambda);

}  // namespace precis
