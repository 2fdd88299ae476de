#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "precis/diagnostics.hpp"
#include "precis/matops.hpp"

namespace precis {

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LpNumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { glasso, clime, scio, naive };

std::string_view method_name(Method m);
/// Throws std::invalid_argument for unknown names.
Method parse_method(std::string_view name);

/// Off-diagonal magnitude at or below which an estimated entry is not an edge.
inline constexpr double kSupportEpsilon = 1e-8;

struct EstimatorConfig {
  double lambda = 0.1;
  bool penalize_diagonal = true;
  /// glasso: outer block sweeps; converged when the largest change in the
  /// working covariance falls below tol * mean |S_ij| (i != j).
  int max_iter = 200;
  double tol = 1e-5;
  /// Coordinate descent on each lasso / SCIO column: sweep cap and relative
  /// step tolerance.
  int cd_max_sweeps = 5000;
  double cd_tol = 1e-10;

  void validate() const;
};

struct EstimateResult {
  SymMatrix omega;
  SupportSet support;
  double lambda_used = 0.0;
  int iterations = 0;
  bool converged = true;
  std::optional<ObjectiveBreakdown> objective;  // glasso only
  /// Column solutions before min-magnitude symmetrisation (CLIME, SCIO).
  Matrix raw_columns;
  /// Set by calibrate_lambda: whether |support| hit the requested count.
  bool calibrated = true;
  bool target_clamped = false;
};

EstimateResult glasso(const SymMatrix& s, const EstimatorConfig& cfg);
EstimateResult clime(const SymMatrix& s, const EstimatorConfig& cfg);
EstimateResult scio(const SymMatrix& s, const EstimatorConfig& cfg);
/// Inverse of s keeping only the target_edges largest off-diagonal magnitudes;
/// equal magnitudes are taken in lexicographic pair order.
EstimateResult naive(const SymMatrix& s, std::size_t target_edges);

/// Column j of `raw` is the solution for unit vector e_j. For each pair the
/// entry of smaller magnitude wins; on equal magnitude the (i, j), i < j,
/// entry is taken.
SymMatrix min_magnitude_symmetrize(const Matrix& raw);

/// Largest violation of the glasso stationarity conditions
/// Omega^{-1} - S in lambda * d|omega|. Entries with |omega| <= zero_eps count as zero.
double glasso_kkt_violation(const SymMatrix& omega, const SymMatrix& s, double lambda,
                            bool penalize_diagonal, double zero_eps = kSupportEpsilon);

/// Largest violation of (S beta_i - e_i) in -lambda * d|beta_i| over all columns.
double scio_kkt_violation(const Matrix& raw_columns, const SymMatrix& s, double lambda);

/// Largest |S beta_i - e_i| entry over all columns.
double clime_constraint_residual(const Matrix& raw_columns, const SymMatrix& s);

struct CalibrationConfig {
  double lambda_lo = 1e-6;
  double lambda_hi_factor = 1.1;  // times max |S_ij|, i != j
  int bisection_steps = 60;
  int dense_sweep_points = 200;
  EstimatorConfig base;
};

/// Chooses lambda so the estimate has target_edges edges; when several lambdas
/// hit the target the largest one wins. When no lambda hits it the closest
/// count is returned (overshoot preferred) with calibrated = false.
EstimateResult calibrate_lambda(Method method, const SymMatrix& s, std::size_t target_edges,
                                const CalibrationConfig& cfg = {});

/// Runs `method` at a fixed lambda (naive ignores lambda and keeps all edges).
EstimateResult estimate(Method method, const SymMatrix& s, const EstimatorConfig& cfg);

}  // namespace precis
