#pragma once

#include <cstddef>
#include <stdexcept>

#include "precis/matops.hpp"
#include "precis/rng.hpp"

namespace precis {

class ConstantColumn : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// y = A x + eps with x ~ N(0, sigma_x2 I) in R^d1 and eps ~ N(0, sigma_eps2 I) in R^d2.
/// Variables are ordered (x_1..x_d1, y_1..y_d2).
struct LatentModelSpec {
  std::size_t d1 = 2;
  std::size_t d2 = 10;
  double sigma_x2 = 1.0;
  double sigma_eps2 = 0.01;
  Matrix A;  // d2 x d1

  std::size_t dim() const { return d1 + d2; }
  /// Throws std::invalid_argument on any violated field constraint.
  void validate() const;
};

struct GroundTruthModel {
  SymMatrix covariance;
  SymMatrix precision;
  SupportSet support;

  std::size_t dim() const { return covariance.dim(); }
};

/// n x p observations.
struct Dataset {
  Matrix rows;
  bool standardized = false;

  std::size_t n() const { return rows.rows(); }
  std::size_t p() const { return rows.cols(); }
};

SymMatrix latent_covariance(const LatentModelSpec& spec);

/// Closed-form block inverse of latent_covariance. The support holds exactly
/// the structurally nonzero entries: x-x pairs sharing a nonzero row of A,
/// x-y pairs with A entry nonzero, and never a y-y pair.
GroundTruthModel latent_precision(const LatentModelSpec& spec);

/// d2 x d1 matrix of i.i.d. N(0, scale^2) entries with a `sparsity` fraction
/// independently set to zero.
Matrix random_A(std::size_t d1, std::size_t d2, double scale, double sparsity, Rng& rng);

/// n draws from N(0, cov) as rows of L z.
Dataset sample_mvn(const SymMatrix& cov, std::size_t n, Rng& rng);

/// Centres each column and scales it to unit standard deviation using the
/// 1/n divisor. Throws ConstantColumn on a zero-variance column.
Dataset standardize(const Dataset& d);

/// (1/n) sum (x - mean)(x - mean)^T. Equals (1/n) X^T X on standardised data.
SymMatrix sample_covariance(const Dataset& d);

/// Thresholds invert(c0) at |entry| > delta (diagonal kept) and returns the
/// model with precision Lambda and covariance Lambda^{-1}. Throws
/// NotPositiveDefinite when the thresholded precision is not PD.
GroundTruthModel gene_model_from_correlation(const SymMatrix& c0, double delta);

/// Fraction of off-diagonal pairs absent from the support.
double zero_fraction(const SupportSet& support);

/// Synthetic expression matrix (samples x genes): rank-`rank` factor model
/// plus gene-specific noise with random per-gene scales and offsets.
Matrix synthetic_expression(std::size_t samples, std::size_t genes, std::size_t rank,
                            double noise_sd, Rng& rng);

}  // namespace precis
