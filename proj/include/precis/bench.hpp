#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "precis/estimators.hpp"
#include "precis/models.hpp"

namespace precis {

enum class Experiment { noise, outdim, indim, gamma, gene_assumption, gene_precision, objective };

std::string_view experiment_name(Experiment e);
Experiment parse_experiment(std::string_view name);

struct SweepConfig {
  Experiment experiment = Experiment::noise;
  /// Swept values: sigma_eps (noise, objective), d2 (outdim), d1 (indim),
  /// A scale (gamma), gene subset size (gene-*). Empty means the default grid.
  std::vector<double> grid;
  /// Sample sizes; only gene-precision sweeps more than the first entry.
  /// Empty means {1000}, or {100, 500, 2000} for gene-precision.
  std::vector<std::size_t> n;
  std::size_t d1 = 2;
  std::size_t d2 = 10;
  double sigma_x2 = 1.0;
  double sigma_eps2 = 0.01;
  double a_scale = 1.0;
  double a_sparsity = 0.0;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  /// Empty means the experiment default: all four methods for noise and
  /// dimension sweeps, glasso alone otherwise.
  std::vector<Method> methods;
  /// Unset means false for the objective decomposition and true elsewhere.
  std::optional<bool> penalize_diagonal;
  /// Objective decomposition on the identity model instead of the latent one.
  bool identity_control = false;
  unsigned threads = 1;
  bool timing = false;  // adds a wall_ms column; output is then not reproducible

  // gene pipeline
  std::string expression_file;  // empty: bundled synthetic generator
  bool genes_in_rows = false;
  bool expression_header = true;
  bool expression_row_labels = true;
  double delta = 0.1;
  std::vector<double> cutoffs = {1, 2, 5, 10, 20};
  std::size_t synthetic_samples = 400;
  std::size_t synthetic_genes = 300;
  std::size_t synthetic_rank = 10;
  double synthetic_noise = 4.0;  // about 60% zeros in the thresholded precision
  std::uint64_t synthetic_seed = 1;

  std::string output;   // record CSV; empty means stdout
  std::string summary;  // summary CSV; empty means none

  bool grid_is_default = false;  // set by apply_defaults

  /// Fills the grid, methods and penalty convention left unset.
  void apply_defaults();
  /// Throws std::invalid_argument on a bad field.
  void validate() const;
};

/// Applies `key = value` entries (field names as in SweepConfig). Unknown
/// keys throw ParseError.
void apply_config_entries(SweepConfig& cfg, const std::map<std::string, std::string>& entries);

std::vector<double> default_grid(Experiment e);

struct SweepRecord {
  std::string experiment;
  double grid = 0.0;
  std::size_t n = 0;
  std::string method;  // empty for rows that run no estimator
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::string status = "ok";
  int attempts = 1;
  double lambda = std::nan("");
  std::size_t true_edges = 0;
  std::size_t estimated_edges = 0;
  std::size_t true_positives = 0;
  std::size_t hamming = 0;
  double precision = std::nan("");
  bool precision_defined = false;
  bool calibrated = false;
  bool converged = false;
  double random_hamming = std::nan("");
  double random_precision = std::nan("");
  double gamma = std::nan("");
  double zero_fraction = std::nan("");
  std::optional<ObjectiveBreakdown> est_objective;
  std::optional<ObjectiveBreakdown> truth_objective;
  double penalty_bound = std::nan("");
  double wall_ms = 0.0;

  bool ok() const { return status == "ok"; }
};

using SweepTable = std::vector<SweepRecord>;

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

SweepTable run_noise_sweep(const SweepConfig& cfg);
SweepTable run_dim_sweep(const SweepConfig& cfg);
SweepTable run_gamma_sweep(const SweepConfig& cfg);
SweepTable run_objective_decomposition(const SweepConfig& cfg);
SweepTable run_gene_assumption(const SweepConfig& cfg);
SweepTable run_gene_precision(const SweepConfig& cfg);
/// Dispatches on cfg.experiment after apply_defaults().
SweepTable run_sweep(SweepConfig cfg);

/// Precision of the correlation matrix of `model`: D C^{-1} D with D the
/// standard deviations. Same support as model.precision.
SymMatrix correlation_precision(const GroundTruthModel& model);
/// Assumption-1 gamma of the correlation-scale latent model, i.e. of
/// to_correlation(C)^{-1} with the structural support.
double latent_gamma(const LatentModelSpec& spec);

/// Expression matrix used by the gene experiments (file or synthetic).
Matrix load_gene_expression(const SweepConfig& cfg);

/// Rows sorted by (grid, n, method, replicate).
void sort_records(SweepTable& rows);
void write_records_csv(std::ostream& out, const SweepConfig& cfg, const SweepTable& rows);
/// Per (grid, n, method): counts, means and standard errors, random-guess
/// means, and for gene-assumption the fraction of subsets with gamma < c.
void write_summary_csv(std::ostream& out, const SweepConfig& cfg, const SweepTable& rows);

}  // namespace precis
