#include "precis/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "bench_internal.hpp"
#include "precis/diagnostics.hpp"
#include "precis/io.hpp"
#include "precis/metrics.hpp"

namespace precis {

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::noise: return "noise";
    case Experiment::outdim: return "outdim";
    case Experiment::indim: return "indim";
    case Experiment::gamma: return "gamma";
    case Experiment::gene_assumption: return "gene-assumption";
    case Experiment::gene_precision: return "gene-precision";
    case Experiment::objective: return "objective";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::noise, Experiment::outdim, Experiment::indim, Experiment::gamma,
                 Experiment::gene_assumption, Experiment::gene_precision, Experiment::objective})
    if (experiment_name(e) == name) return e;
  throw std::invalid_argument("unknown experiment: " + std::string(name));
}

std::vector<double> default_grid(Experiment e) {
  switch (e) {
    case Experiment::noise: return log_grid(1e-2, 1e1, 13);
    case Experiment::objective: return log_grid(1e-2, 1e1, 7);
    case Experiment::outdim: return {4, 6, 8, 10, 14, 18, 22, 26, 30};
    case Experiment::indim: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    case Experiment::gamma: return log_grid(1e-3, 1e1, 13);
    case Experiment::gene_assumption:
    case Experiment::gene_precision: return {5, 10, 20, 40};
  }
  return {};
}

void SweepConfig::apply_defaults() {
  if (grid.empty()) {
    grid = default_grid(experiment);
    grid_is_default = true;
  }
  if (n.empty()) {
    if (experiment == Experiment::gene_precision)
      n = {100, 500, 2000};
    else
      n = {1000};
  }
  if (methods.empty()) {
    if (experiment == Experiment::noise || experiment == Experiment::outdim || experiment == Experiment::indim)
      methods = {Method::glasso, Method::clime, Method::scio, Method::naive};
    else
      methods = {Method::glasso};
  }
  if (!penalize_diagonal) penalize_diagonal = experiment != Experiment::objective;
}

void SweepConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (n.empty()) throw std::invalid_argument("n is empty");
  for (auto v : n)
    if (v < 2) throw std::invalid_argument("sample sizes must be at least 2");
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("d1 and d2 must be at least 1");
  if (!(sigma_x2 > 0.0) || !(sigma_eps2 > 0.0)) throw std::invalid_argument("variances must be positive");
  if (!(a_scale >= 0.0)) throw std::invalid_argument("a_scale must be non-negative");
  if (!(a_sparsity >= 0.0 && a_sparsity < 1.0)) throw std::invalid_argument("a_sparsity must be in [0, 1)");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  for (double g : grid) {
    if (!std::isfinite(g) || !(g > 0.0)) throw std::invalid_argument("grid values must be positive and finite");
    const bool integral = experiment == Experiment::outdim || experiment == Experiment::indim ||
                          experiment == Experiment::gene_assumption || experiment == Experiment::gene_precision;
    if (integral && g != std::floor(g)) throw std::invalid_argument("grid values must be integers for this experiment");
  }
  if (experiment == Experiment::gene_assumption || experiment == Experiment::gene_precision) {
    for (double g : grid)
      if (g < 2) throw std::invalid_argument("gene subsets need at least 2 genes");
  }
}

void apply_config_entries(SweepConfig& cfg, const std::map<std::string, std::string>& entries) {
  const auto size = [](const std::string& v, const std::string& key) {
    const long long x = parse_integer(v, key);
    if (x < 0) throw ParseError(key + " must be non-negative");
    return static_cast<std::size_t>(x);
  };
  for (const auto& [key, value] : entries) {
    if (key == "experiment") {
      try {
        cfg.experiment = parse_experiment(value);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
      }
    } else if (key == "grid") {
      cfg.grid = parse_grid(value);
    } else if (key == "n") {
      cfg.n.clear();
      for (const auto& item : split_list(value)) cfg.n.push_back(size(item, key));
    } else if (key == "d1") {
      cfg.d1 = size(value, key);
    } else if (key == "d2") {
      cfg.d2 = size(value, key);
    } else if (key == "sigma_x2") {
      cfg.sigma_x2 = parse_double(value, key);
    } else if (key == "sigma_eps2") {
      cfg.sigma_eps2 = parse_double(value, key);
    } else if (key == "a_scale") {
      cfg.a_scale = parse_double(value, key);
    } else if (key == "a_sparsity" || key == "sparsity") {
      cfg.a_sparsity = parse_double(value, key);
    } else if (key == "k") {
      cfg.k = size(value, key);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& item : split_list(value)) {
        try {
          cfg.methods.push_back(parse_method(item));
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what());
        }
      }
    } else if (key == "penalize_diagonal") {
      cfg.penalize_diagonal = parse_bool(value, key);
    } else if (key == "identity_control") {
      cfg.identity_control = parse_bool(value, key);
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(size(value, key));
    } else if (key == "timing") {
      cfg.timing = parse_bool(value, key);
    } else if (key == "expression" || key == "expression_file") {
      cfg.expression_file = value;
    } else if (key == "genes_in_rows") {
      cfg.genes_in_rows = parse_bool(value, key);
    } else if (key == "expression_header") {
      cfg.expression_header = parse_bool(value, key);
    } else if (key == "expression_row_labels") {
      cfg.expression_row_labels = parse_bool(value, key);
    } else if (key == "delta") {
      cfg.delta = parse_double(value, key);
    } else if (key == "cutoffs") {
      cfg.cutoffs = parse_grid(value);
    } else if (key == "synthetic_samples") {
      cfg.synthetic_samples = size(value, key);
    } else if (key == "synthetic_genes") {
      cfg.synthetic_genes = size(value, key);
    } else if (key == "synthetic_rank") {
      cfg.synthetic_rank = size(value, key);
    } else if (key == "synthetic_noise") {
      cfg.synthetic_noise = parse_double(value, key);
    } else if (key == "synthetic_seed") {
      cfg.synthetic_seed = static_cast<std::uint64_t>(parse_integer(value, key));
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "summary") {
      cfg.summary = value;
    } else {
      throw ParseError("unknown config key: " + key);
    }
  }
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace detail {

std::uint64_t experiment_tag(Experiment e) { return static_cast<std::uint64_t>(e) + 1; }

namespace {

std::string clean_reason(std::string why) {
  for (auto& ch : why)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  return why;
}

}  // namespace

std::vector<SweepRecord> with_retries(const std::function<std::vector<SweepRecord>(int)>& body,
                                      const std::function<std::vector<SweepRecord>()>& failed) {
  std::string why;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    try {
      auto rows = body(attempt);
      for (auto& r : rows) r.attempts = attempt + 1;
      return rows;
    } catch (const std::runtime_error& e) {
      why = e.what();
    }
  }
  auto rows = failed();
  for (auto& r : rows) {
    r.status = "failed: " + clean_reason(why);
    r.attempts = kMaxRetries + 1;
  }
  return rows;
}

CalibrationConfig calibration_for(const SweepConfig& cfg) {
  CalibrationConfig c;
  c.base.penalize_diagonal = cfg.penalize_diagonal.value_or(true);
  return c;
}

SweepRecord score_method(Method method, const SymMatrix& s, const SupportSet& truth,
                         const SweepConfig& cfg, SweepRecord proto, EstimateResult* keep) {
  const auto start = std::chrono::steady_clock::now();
  EstimateResult r = calibrate_lambda(method, s, truth.size(), calibration_for(cfg));
  const auto stop = std::chrono::steady_clock::now();
  SweepRecord rec = std::move(proto);
  rec.method = std::string(method_name(method));
  rec.dim = s.dim();
  rec.lambda = method == Method::naive ? std::nan("") : r.lambda_used;
  const RecoveryScore sc = score(truth, r.support);
  rec.true_edges = sc.true_edges;
  rec.estimated_edges = sc.estimated_edges;
  rec.true_positives = sc.true_positives;
  rec.hamming = sc.hamming;
  rec.precision = sc.precision;
  rec.precision_defined = sc.precision_defined;
  rec.calibrated = r.calibrated;
  rec.converged = r.converged;
  const RandomGuess rg = random_guess_expectation(s.dim(), sc.true_edges, sc.estimated_edges);
  rec.random_hamming = rg.expected_hamming;
  rec.random_precision = rg.expected_precision;
  if (cfg.timing) rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  if (keep) *keep = std::move(r);
  return rec;
}

std::vector<SweepRecord> failed_rows(const SweepConfig& cfg, SweepRecord proto) {
  std::vector<SweepRecord> rows;
  for (Method m : cfg.methods) {
    SweepRecord r = proto;
    r.method = std::string(method_name(m));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace detail

namespace {

using detail::experiment_tag;

SweepRecord prototype(const SweepConfig& cfg, double grid, std::size_t n, std::size_t rep, std::uint64_t seed) {
  SweepRecord r;
  r.experiment = std::string(experiment_name(cfg.experiment));
  r.grid = grid;
  r.n = n;
  r.replicate = rep;
  r.seed = seed;
  return r;
}

/// Runs task(grid index, replicate) over the full grid x k in parallel and
/// returns the sorted concatenation.
SweepTable run_grid(const SweepConfig& cfg,
                    const std::function<std::vector<SweepRecord>(std::size_t, std::size_t)>& task) {
  const std::size_t count = cfg.grid.size() * cfg.k;
  std::vector<std::vector<SweepRecord>> slots(count);
  parallel_for(count, cfg.threads, [&](std::size_t t) { slots[t] = task(t / cfg.k, t % cfg.k); });
  SweepTable rows;
  for (auto& s : slots)
    for (auto& r : s) rows.push_back(std::move(r));
  sort_records(rows);
  return rows;
}

LatentModelSpec make_spec(const SweepConfig& cfg, std::size_t d1, std::size_t d2, double sigma_eps2,
                          double scale, std::uint64_t a_seed) {
  LatentModelSpec spec;
  spec.d1 = d1;
  spec.d2 = d2;
  spec.sigma_x2 = cfg.sigma_x2;
  spec.sigma_eps2 = sigma_eps2;
  Rng rng(a_seed);
  spec.A = random_A(d1, d2, scale, cfg.a_sparsity, rng);
  return spec;
}

/// Sample, standardise, and score every configured method on one latent model.
std::vector<SweepRecord> latent_replicate(const SweepConfig& cfg, const LatentModelSpec& spec,
                                          std::uint64_t data_seed, const SweepRecord& proto) {
  const GroundTruthModel model = latent_precision(spec);
  Rng rng(data_seed);
  const SymMatrix s = sample_covariance(standardize(sample_mvn(model.covariance, proto.n, rng)));
  std::vector<SweepRecord> rows;
  for (Method m : cfg.methods) rows.push_back(detail::score_method(m, s, model.support, cfg, proto));
  return rows;
}

}  // namespace

SweepTable run_noise_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::uint64_t tag = experiment_tag(cfg.experiment);
  return run_grid(cfg, [&](std::size_t g, std::size_t rep) {
    const double sigma = cfg.grid[g];
    const auto body = [&](int attempt) {
      const auto a = static_cast<std::uint64_t>(attempt);
      // A depends on the replicate only, so each curve follows the same models across the grid
      const LatentModelSpec spec =
          make_spec(cfg, cfg.d1, cfg.d2, sigma * sigma, cfg.a_scale, derive_seed(cfg.seed, {tag, 0, rep, a}));
      const std::uint64_t data_seed = derive_seed(cfg.seed, {tag, 1, g, rep, a});
      return latent_replicate(cfg, spec, data_seed, prototype(cfg, sigma, cfg.n.front(), rep, data_seed));
    };
    return detail::with_retries(body, [&] {
      return detail::failed_rows(cfg, prototype(cfg, sigma, cfg.n.front(), rep, derive_seed(cfg.seed, {tag, 1, g, rep, 0})));
    });
  });
}

SweepTable run_dim_sweep(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.experiment != Experiment::outdim && cfg.experiment != Experiment::indim)
    throw std::invalid_argument("dimension sweep needs experiment outdim or indim");
  const std::uint64_t tag = experiment_tag(cfg.experiment);
  const bool out = cfg.experiment == Experiment::outdim;
  return run_grid(cfg, [&](std::size_t g, std::size_t rep) {
    const auto dim = static_cast<std::size_t>(cfg.grid[g]);
    const std::size_t d1 = out ? cfg.d1 : dim;
    const std::size_t d2 = out ? dim : cfg.d2;
    const auto body = [&](int attempt) {
      const auto a = static_cast<std::uint64_t>(attempt);
      const LatentModelSpec spec =
          make_spec(cfg, d1, d2, cfg.sigma_eps2, cfg.a_scale, derive_seed(cfg.seed, {tag, 0, g, rep, a}));
      const std::uint64_t data_seed = derive_seed(cfg.seed, {tag, 1, g, rep, a});
      return latent_replicate(cfg, spec, data_seed, prototype(cfg, cfg.grid[g], cfg.n.front(), rep, data_seed));
    };
    return detail::with_retries(body, [&] {
      return detail::failed_rows(cfg, prototype(cfg, cfg.grid[g], cfg.n.front(), rep, derive_seed(cfg.seed, {tag, 1, g, rep, 0})));
    });
  });
}

SymMatrix correlation_precision(const GroundTruthModel& model) {
  const std::size_t p = model.dim();
  // precision of D^{-1} C D^{-1} is D C^{-1} D; built entrywise so structural zeros stay exact
  SymMatrix prec(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j)
      prec.set(i, j, model.precision(i, j) * std::sqrt(model.covariance(i, i) * model.covariance(j, j)));
  return prec;
}

double latent_gamma(const LatentModelSpec& spec) {
  const GroundTruthModel model = latent_precision(spec);
  return assumption1_gamma(correlation_precision(model), model.support);
}

SweepTable run_gamma_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::uint64_t tag = experiment_tag(cfg.experiment);
  return run_grid(cfg, [&](std::size_t g, std::size_t rep) {
    const double scale = cfg.grid[g];
    const auto body = [&](int attempt) {
      const std::uint64_t a_seed = derive_seed(cfg.seed, {tag, 0, rep, static_cast<std::uint64_t>(attempt)});
      const LatentModelSpec spec = make_spec(cfg, cfg.d1, cfg.d2, cfg.sigma_eps2, scale, a_seed);
      const GroundTruthModel model = latent_precision(spec);
      const SymMatrix corr = to_correlation(model.covariance);
      const double gamma = latent_gamma(spec);
      std::vector<SweepRecord> rows;
      for (Method m : cfg.methods) {
        SweepRecord r = detail::score_method(m, corr, model.support, cfg, prototype(cfg, scale, 0, rep, a_seed));
        r.gamma = gamma;
        rows.push_back(std::move(r));
      }
      return rows;
    };
    return detail::with_retries(body, [&] {
      return detail::failed_rows(cfg, prototype(cfg, scale, 0, rep, derive_seed(cfg.seed, {tag, 0, rep, 0})));
    });
  });
}

SweepTable run_objective_decomposition(const SweepConfig& cfg) {
  cfg.validate();
  const std::uint64_t tag = experiment_tag(cfg.experiment);
  const bool pd = cfg.penalize_diagonal.value_or(false);
  SweepConfig run_cfg = cfg;
  run_cfg.methods = {Method::glasso};
  run_cfg.penalize_diagonal = pd;
  return run_grid(run_cfg, [&](std::size_t g, std::size_t rep) {
    const double sigma = cfg.grid[g];
    const std::size_t n = cfg.n.front();
    const auto body = [&](int attempt) {
      const auto a = static_cast<std::uint64_t>(attempt);
      const std::uint64_t data_seed = derive_seed(cfg.seed, {tag, 1, g, rep, a});
      SymMatrix s;
      SymMatrix truth;
      SupportSet support;
      double bound_per_lambda = std::nan("");
      if (cfg.identity_control) {
        s = SymMatrix::identity(cfg.d1 + cfg.d2);
        truth = s;
        support = SupportSet(s.dim());
      } else {
        const LatentModelSpec spec =
            make_spec(cfg, cfg.d1, cfg.d2, sigma * sigma, cfg.a_scale, derive_seed(cfg.seed, {tag, 0, rep, a}));
        const GroundTruthModel model = latent_precision(spec);
        Rng rng(data_seed);
        s = sample_covariance(standardize(sample_mvn(model.covariance, n, rng)));
        truth = correlation_precision(model);
        support = model.support;
        bound_per_lambda = latent_penalty_lower_bound(spec, 1.0);
      }
      EstimateResult est;
      SweepRecord r = detail::score_method(Method::glasso, s, support, run_cfg,
                                           prototype(run_cfg, sigma, cfg.identity_control ? 0 : n, rep, data_seed), &est);
      r.est_objective = glasso_objective(est.omega, s, est.lambda_used, pd);
      r.truth_objective = glasso_objective(truth, s, est.lambda_used, pd);
      r.penalty_bound = bound_per_lambda * est.lambda_used;
      return std::vector<SweepRecord>{r};
    };
    return detail::with_retries(body, [&] {
      return detail::failed_rows(run_cfg, prototype(run_cfg, sigma, n, rep, derive_seed(cfg.seed, {tag, 1, g, rep, 0})));
    });
  });
}

SweepTable run_sweep(SweepConfig cfg) {
  cfg.apply_defaults();
  switch (cfg.experiment) {
    case Experiment::noise: return run_noise_sweep(cfg);
    case Experiment::outdim:
    case Experiment::indim: return run_dim_sweep(cfg);
    case Experiment::gamma: return run_gamma_sweep(cfg);
    case Experiment::objective: return run_objective_decomposition(cfg);
    case Experiment::gene_assumption: return run_gene_assumption(cfg);
    case Experiment::gene_precision: return run_gene_precision(cfg);
  }
  throw std::invalid_argument("unknown experiment");
}

// ---------------------------------------------------------------- output

namespace {

int method_rank(const std::string& m) {
  if (m.empty()) return -1;
  return static_cast<int>(parse_method(m));
}

std::string na(double v) { return std::isnan(v) ? std::string() : format_number(v); }

}  // namespace

void sort_records(SweepTable& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRecord& a, const SweepRecord& b) {
    if (a.grid != b.grid) return a.grid < b.grid;
    if (a.n != b.n) return a.n < b.n;
    const int ma = method_rank(a.method);
    const int mb = method_rank(b.method);
    if (ma != mb) return ma < mb;
    return a.replicate < b.replicate;
  });
}

namespace {

void write_preamble(std::ostream& out, const SweepConfig& cfg) {
  out << "# precis-lab v1 " << experiment_name(cfg.experiment) << '\n';
  out << "# grid: " << (cfg.grid_is_default ? "default (span-matched)" : "user") << '\n';
  out << "# seed: " << cfg.seed << '\n';
}

}  // namespace

void write_records_csv(std::ostream& out, const SweepConfig& cfg, const SweepTable& rows) {
  write_preamble(out, cfg);
  out << "experiment,grid,n,method,replicate,seed,dim,status,attempts,lambda,true_edges,estimated_edges,"
         "true_positives,hamming,precision,precision_defined,calibrated,converged,random_hamming,"
         "random_precision,gamma,zero_fraction,est_log_det,est_neg_trace,est_penalty,est_total,"
         "truth_log_det,truth_neg_trace,truth_penalty,truth_total,penalty_bound";
  if (cfg.timing) out << ",wall_ms";
  out << '\n';
  const auto obj = [&out](const std::optional<ObjectiveBreakdown>& o) {
    if (o)
      out << ',' << format_number(o->log_det_term) << ',' << format_number(o->neg_trace_term) << ','
          << format_number(o->penalty_term) << ',' << format_number(o->total);
    else
      out << ",,,,";
  };
  for (const auto& r : rows) {
    const bool scored = !r.method.empty() && r.ok();
    out << r.experiment << ',' << format_number(r.grid) << ',' << r.n << ',' << r.method << ',' << r.replicate
        << ',' << r.seed << ',' << r.dim << ',' << r.status << ',' << r.attempts << ',' << na(r.lambda) << ','
        << r.true_edges << ',';
    if (scored)
      out << r.estimated_edges << ',' << r.true_positives << ',' << r.hamming << ',' << na(r.precision) << ','
          << (r.precision_defined ? 1 : 0) << ',' << (r.calibrated ? 1 : 0) << ',' << (r.converged ? 1 : 0);
    else
      out << ",,,,,,";
    out << ',' << na(r.random_hamming) << ',' << na(r.random_precision) << ',' << na(r.gamma) << ','
        << na(r.zero_fraction);
    obj(r.est_objective);
    obj(r.truth_objective);
    out << ',' << na(r.penalty_bound);
    if (cfg.timing) out << ',' << format_number(r.wall_ms);
    out << '\n';
  }
}

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  void add(double v) {
    if (std::isnan(v)) return;
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : std::nan(""); }
  double se() const {
    if (count < 2) return std::nan("");
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1));
    return std::sqrt(var / static_cast<double>(count));
  }
};

}  // namespace

void write_summary_csv(std::ostream& out, const SweepConfig& cfg, const SweepTable& rows) {
  write_preamble(out, cfg);
  const bool gene_assumption = cfg.experiment == Experiment::gene_assumption;
  const bool objective = cfg.experiment == Experiment::objective;
  out << "experiment,grid,n,method,replicates,failed,mean_lambda,mean_hamming,se_hamming,mean_precision,"
         "se_precision,mean_random_hamming,mean_random_precision,mean_gamma,se_gamma,mean_zero_fraction";
  if (objective)
    out << ",mean_est_log_det,mean_est_neg_trace,mean_est_penalty,mean_est_total,mean_truth_log_det,"
           "mean_truth_neg_trace,mean_truth_penalty,mean_truth_total,mean_penalty_bound";
  if (gene_assumption)
    for (double c : cfg.cutoffs) out << ",frac_gamma_lt_" << format_number(c);
  out << '\n';

  std::size_t begin = 0;
  while (begin < rows.size()) {
    std::size_t end = begin;
    while (end < rows.size() && rows[end].grid == rows[begin].grid && rows[end].n == rows[begin].n &&
           rows[end].method == rows[begin].method)
      ++end;
    Moments lambda, hamming, precision, rh, rp, gamma, zf;
    std::vector<Moments> terms(9);
    std::vector<std::size_t> below(cfg.cutoffs.size(), 0);
    std::size_t ok = 0;
    std::size_t failed = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& r = rows[i];
      if (!r.ok()) {
        ++failed;
        continue;
      }
      ++ok;
      lambda.add(r.lambda);
      if (!r.method.empty()) {
        hamming.add(static_cast<double>(r.hamming));
        precision.add(r.precision);
      }
      rh.add(r.random_hamming);
      rp.add(r.random_precision);
      gamma.add(r.gamma);
      zf.add(r.zero_fraction);
      if (r.est_objective && r.truth_objective) {
        const auto& e = *r.est_objective;
        const auto& t = *r.truth_objective;
        const double vals[9] = {e.log_det_term, e.neg_trace_term, e.penalty_term, e.total, t.log_det_term,
                                t.neg_trace_term, t.penalty_term, t.total, r.penalty_bound};
        for (int k = 0; k < 9; ++k) terms[k].add(vals[k]);
      }
      for (std::size_t c = 0; c < cfg.cutoffs.size(); ++c)
        if (r.gamma < cfg.cutoffs[c]) ++below[c];
    }
    const auto& head = rows[begin];
    out << head.experiment << ',' << format_number(head.grid) << ',' << head.n << ',' << head.method << ',' << ok
        << ',' << failed << ',' << na(lambda.mean()) << ',' << na(hamming.mean()) << ',' << na(hamming.se()) << ','
        << na(precision.mean()) << ',' << na(precision.se()) << ',' << na(rh.mean()) << ',' << na(rp.mean()) << ','
        << na(gamma.mean()) << ',' << na(gamma.se()) << ',' << na(zf.mean());
    if (objective)
      for (const auto& m : terms) out << ',' << na(m.mean());
    if (gene_assumption)
      for (std::size_t c = 0; c < cfg.cutoffs.size(); ++c)
        out << ',' << (ok ? format_number(static_cast<double>(below[c]) / static_cast<double>(ok)) : std::string());
    out << '\n';
    begin = end;
  }
}

}  // namespace precis
