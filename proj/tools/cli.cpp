#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "precis/bench.hpp"
#include "precis/diagnostics.hpp"
#include "precis/estimators.hpp"
#include "precis/io.hpp"
#include "precis/models.hpp"

namespace precis {

namespace {

/// Thrown for bad arguments found after CLI11 parsing; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ParseError("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

SymMatrix read_symmetric(const std::string& path) {
  const Matrix m = read_matrix_file(path);
  if (m.rows() != m.cols() || m.rows() == 0) throw ParseError(path + ": matrix must be square and nonempty");
  double scale = 0.0;
  double asym = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
      asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    }
  // tolerate rounding from tools that print fewer digits
  if (asym > 1e-9 * std::max(scale, 1.0)) throw ParseError(path + ": matrix is not symmetric");
  return SymMatrix::symmetrized(m);
}

// ------------------------------------------------------------------ generate

struct GenerateArgs {
  LatentModelSpec spec;
  double a_scale = 1.0;
  double sparsity = 0.0;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  bool standardize_data = false;
  std::string output, covariance_out, precision_out;
  bool expression = false;
  std::size_t genes = 300, samples = 400, rank = 10;
  double noise = 4.0;
};

int run_generate(const GenerateArgs& a) {
  Rng rng(a.seed);
  if (a.expression) {
    ExpressionMatrix em;
    em.values = synthetic_expression(a.samples, a.genes, a.rank, a.noise, rng);
    for (std::size_t g = 0; g < a.genes; ++g) em.genes.push_back("g" + std::to_string(g));
    Output out(a.output);
    write_expression(out.stream(), em);
    out.finish();
    return 0;
  }
  LatentModelSpec spec = a.spec;
  Rng a_rng = rng.split(0);
  spec.A = random_A(spec.d1, spec.d2, a.a_scale, a.sparsity, a_rng);
  const GroundTruthModel model = latent_precision(spec);
  Rng data_rng = rng.split(1);
  Dataset data = sample_mvn(model.covariance, a.n, data_rng);
  if (a.standardize_data) data = standardize(data);
  if (!a.covariance_out.empty()) write_matrix_file(a.covariance_out, model.covariance.dense());
  if (!a.precision_out.empty()) write_matrix_file(a.precision_out, model.precision.dense());
  Output out(a.output);
  write_matrix(out.stream(), data.rows);
  out.finish();
  return 0;
}

// ------------------------------------------------------------------ estimate

struct EstimateArgs {
  std::string covariance, data, method, output;
  double lambda = 0.1;
  std::optional<std::size_t> target_edges;
  bool penalize_diagonal = true;
};

int run_estimate(const EstimateArgs& a) {
  Method method;
  try {
    method = parse_method(a.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.covariance.empty() == a.data.empty()) throw UsageError("give exactly one of --covariance and --data");
  SymMatrix s;
  if (!a.covariance.empty()) {
    s = read_symmetric(a.covariance);
  } else {
    Dataset d;
    d.rows = read_matrix_file(a.data);
    s = sample_covariance(standardize(d));
  }
  EstimatorConfig ec;
  ec.lambda = a.lambda;
  ec.penalize_diagonal = a.penalize_diagonal;
  EstimateResult r;
  if (a.target_edges) {
    CalibrationConfig cc;
    cc.base = ec;
    r = calibrate_lambda(method, s, *a.target_edges, cc);
  } else {
    ec.validate();
    r = estimate(method, s, ec);
  }
  Output out(a.output);
  write_matrix(out.stream(), r.omega);
  out.finish();
  std::fprintf(stderr, "method=%s lambda=%.10g edges=%zu iterations=%d converged=%d calibrated=%d\n",
               std::string(method_name(method)).c_str(), r.lambda_used, r.support.size(), r.iterations,
               r.converged ? 1 : 0, r.calibrated ? 1 : 0);
  return 0;
}

// ------------------------------------------------------------------ diagnose

struct DiagnoseArgs {
  std::string precision, covariance, output;
  double support_eps = 0.0;
  bool rows = false;
};

int run_diagnose(const DiagnoseArgs& a) {
  if (!(a.support_eps >= 0.0)) throw UsageError("--support-eps must be non-negative");
  const SymMatrix raw = read_symmetric(a.precision);
  SymMatrix prec(raw.dim());
  for (std::size_t i = 0; i < raw.dim(); ++i)
    for (std::size_t j = i; j < raw.dim(); ++j)
      prec.set(i, j, i == j || std::abs(raw(i, j)) > a.support_eps ? raw(i, j) : 0.0);
  const SupportSet support = SupportSet::from_matrix(prec, 0.0);
  const SymMatrix cov = a.covariance.empty() ? invert(prec) : read_symmetric(a.covariance);
  const auto report = consistency_report(cov, prec, support, a.rows ? NormAxis::rows : NormAxis::columns);
  Output out(a.output);
  out.stream() << ConsistencyReport::csv_header() << '\n' << report.csv_row() << '\n';
  out.finish();
  return 0;
}

// ------------------------------------------------------------------ bench

struct BenchArgs {
  Experiment experiment = Experiment::noise;
  std::string config;
  std::string axis;
  std::map<std::string, std::string> overrides;
};

void add_value(CLI::App* app, BenchArgs& b, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(flag, [&b, key](const std::string& v) { b.overrides[key] = v; }, help);
}

void add_switch(CLI::App* app, BenchArgs& b, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_flag_callback(flag, [&b, key] { b.overrides[key] = "true"; }, help);
}

void add_common_bench(CLI::App* app, BenchArgs& b) {
  app->add_option("--config", b.config, "key = value file; flags override it");
  add_value(app, b, "--seed", "seed", "master seed (required here or in the config)");
  add_value(app, b, "--grid", "grid", "swept values: a,b,c or log:lo:hi:count");
  add_value(app, b, "--k", "k", "replicates per grid point");
  add_value(app, b, "--threads", "threads", "worker threads (0 = all cores)");
  add_value(app, b, "--output,-o", "output", "record CSV path (default stdout)");
  add_value(app, b, "--summary", "summary", "summary CSV path");
  add_switch(app, b, "--timing", "timing", "add a wall_ms column (not reproducible)");
  add_value(app, b, "--methods", "methods", "comma list of glasso,clime,scio,naive");
  add_value(app, b, "--penalize-diagonal", "penalize_diagonal", "true/false");
}

void add_latent_bench(CLI::App* app, BenchArgs& b) {
  add_value(app, b, "--n", "n", "sample size");
  add_value(app, b, "--d1", "d1", "input dimension");
  add_value(app, b, "--d2", "d2", "output dimension");
  add_value(app, b, "--sigma-x2", "sigma_x2", "variance of x");
  add_value(app, b, "--sigma-eps2", "sigma_eps2", "noise variance (not swept)");
  add_value(app, b, "--a-scale", "a_scale", "standard deviation of A entries (not swept)");
  add_value(app, b, "--sparsity", "a_sparsity", "fraction of A entries zeroed");
}

void add_gene_bench(CLI::App* app, BenchArgs& b) {
  add_value(app, b, "--expression", "expression", "expression matrix file (default: bundled synthetic data)");
  add_switch(app, b, "--genes-in-rows", "genes_in_rows", "genes are rows and samples columns");
  add_value(app, b, "--delta", "delta", "threshold on the inverse correlation");
  add_value(app, b, "--synthetic-genes", "synthetic_genes", "genes in the synthetic data");
  add_value(app, b, "--synthetic-samples", "synthetic_samples", "samples in the synthetic data");
  add_value(app, b, "--synthetic-rank", "synthetic_rank", "factor rank of the synthetic data");
  add_value(app, b, "--synthetic-noise", "synthetic_noise", "noise standard deviation of the synthetic data");
  add_value(app, b, "--synthetic-seed", "synthetic_seed", "seed of the synthetic data");
}

int run_bench(BenchArgs& b) {
  SweepConfig cfg;
  std::map<std::string, std::string> entries;
  if (!b.config.empty()) {
    try {
      entries = read_config_file(b.config);
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& [k, v] : b.overrides) entries[k] = v;
  if (!entries.count("seed")) throw UsageError("--seed is required for bench commands");

  Experiment experiment = b.experiment;
  if (experiment == Experiment::outdim) {
    const std::string from_config = entries.count("experiment") ? entries["experiment"] : std::string();
    const std::string axis = !b.axis.empty() ? b.axis : from_config == "indim" ? "in" : "out";
    if (axis != "in" && axis != "out") throw UsageError("--axis must be in or out");
    experiment = axis == "in" ? Experiment::indim : Experiment::outdim;
  }
  entries.erase("experiment");
  try {
    apply_config_entries(cfg, entries);
    cfg.experiment = experiment;
    cfg.apply_defaults();
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }

  const SweepTable rows = run_sweep(cfg);
  Output out(cfg.output);
  write_records_csv(out.stream(), cfg, rows);
  out.finish();
  if (!cfg.summary.empty()) {
    Output sum(cfg.summary);
    write_summary_csv(sum.stream(), cfg, rows);
    sum.finish();
  }
  std::size_t failed = 0, retried = 0;
  for (const auto& r : rows) {
    failed += r.ok() ? 0 : 1;
    retried += r.ok() && r.attempts > 1 && cfg.experiment != Experiment::gene_assumption ? 1 : 0;
  }
  std::fprintf(stderr, "%s: %zu rows, %zu failed, %zu retried\n", std::string(experiment_name(cfg.experiment)).c_str(),
               rows.size(), failed, retried);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"precis: sparse precision matrix estimation laboratory"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "sample data from a latent model, or write synthetic expression data");
  g->add_option("--seed", gen.seed, "seed")->required();
  g->add_option("--d1", gen.spec.d1, "input dimension");
  g->add_option("--d2", gen.spec.d2, "output dimension");
  g->add_option("--sigma-x2", gen.spec.sigma_x2, "variance of x");
  g->add_option("--sigma-eps2", gen.spec.sigma_eps2, "noise variance");
  g->add_option("--a-scale", gen.a_scale, "standard deviation of A entries");
  g->add_option("--sparsity", gen.sparsity, "fraction of A entries zeroed");
  g->add_option("--n", gen.n, "samples");
  g->add_flag("--standardize", gen.standardize_data, "centre and scale the columns");
  g->add_option("--output,-o", gen.output, "data file (default stdout)");
  g->add_option("--covariance-out", gen.covariance_out, "write the exact covariance");
  g->add_option("--precision-out", gen.precision_out, "write the exact precision");
  g->add_flag("--expression", gen.expression, "write a synthetic expression matrix instead");
  g->add_option("--genes", gen.genes, "expression: genes");
  g->add_option("--samples", gen.samples, "expression: samples");
  g->add_option("--rank", gen.rank, "expression: factor rank");
  g->add_option("--noise", gen.noise, "expression: noise standard deviation");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "estimate a precision matrix");
  e->add_option("--covariance", est.covariance, "covariance matrix file");
  e->add_option("--data", est.data, "observations file (rows are samples); standardised first");
  e->add_option("--method", est.method, "glasso, clime, scio or naive")->required();
  e->add_option("--lambda", est.lambda, "regularisation parameter");
  e->add_option("--target-edges", est.target_edges, "calibrate lambda to this edge count");
  e->add_option("--penalize-diagonal", est.penalize_diagonal, "glasso: penalise the diagonal (true/false)");
  e->add_option("--output,-o", est.output, "precision matrix file (default stdout)");

  DiagnoseArgs diag;
  auto* d = app.add_subcommand("diagnose", "Assumption 1 and 2 gammas of a precision matrix");
  d->add_option("--precision", diag.precision, "precision matrix file")->required();
  d->add_option("--covariance", diag.covariance, "covariance file (default: inverse of the precision)");
  d->add_option("--support-eps", diag.support_eps, "off-diagonal entries at or below this are zero");
  d->add_flag("--rows", diag.rows, "use row sums instead of column sums");
  d->add_option("--output,-o", diag.output, "CSV path (default stdout)");

  BenchArgs bench;
  auto* bn = app.add_subcommand("bench-noise", "noise-level sweep on latent models");
  add_common_bench(bn, bench);
  add_latent_bench(bn, bench);
  auto* bd = app.add_subcommand("bench-dim", "output or input dimension sweep on latent models");
  add_common_bench(bd, bench);
  add_latent_bench(bd, bench);
  bd->add_option("--axis", bench.axis, "out (d2, default) or in (d1)");
  auto* bg = app.add_subcommand("bench-gamma", "infinite-data glasso precision against gamma");
  add_common_bench(bg, bench);
  add_latent_bench(bg, bench);
  auto* bo = app.add_subcommand("bench-objective", "glasso objective terms for the estimate and the truth");
  add_common_bench(bo, bench);
  add_latent_bench(bo, bench);
  add_switch(bo, bench, "--identity-control", "identity_control", "use the identity model");
  auto* ga = app.add_subcommand("gene-assumption", "Assumption 1 satisfaction over random gene subsets");
  add_common_bench(ga, bench);
  add_gene_bench(ga, bench);
  add_value(ga, bench, "--subsets", "k", "subsets per dimension");
  add_value(ga, bench, "--cutoffs", "cutoffs", "gamma cutoffs");
  auto* gp = app.add_subcommand("gene-precision", "glasso precision on gene-derived models");
  add_common_bench(gp, bench);
  add_gene_bench(gp, bench);
  add_value(gp, bench, "--n", "n", "comma list of sample sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) return run_generate(gen);
    if (e->parsed()) return run_estimate(est);
    if (d->parsed()) return run_diagnose(diag);
    if (bn->parsed()) bench.experiment = Experiment::noise;
    if (bd->parsed()) bench.experiment = Experiment::outdim;
    if (bg->parsed()) bench.experiment = Experiment::gamma;
    if (bo->parsed()) bench.experiment = Experiment::objective;
    if (ga->parsed()) bench.experiment = Experiment::gene_assumption;
    if (gp->parsed()) bench.experiment = Experiment::gene_precision;
    return run_bench(bench);
  } catch (const UsageError& err) {
    std::fprintf(stderr, "usage error: %s\nRun with --help for the expected arguments.\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace precis
