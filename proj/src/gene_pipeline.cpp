#include <numeric>

#include "bench_internal.hpp"
#include "precis/bench.hpp"
#include "precis/diagnostics.hpp"
#include "precis/io.hpp"

namespace precis {

namespace {

constexpr int kMaxSubsetDraws = 100;

struct GeneModel {
  GroundTruthModel model;
  int draws = 0;
};

std::vector<std::size_t> choose_genes(std::size_t total, std::size_t d, Rng& rng) {
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < d; ++i) std::swap(idx[i], idx[i + rng.below(total - i)]);
  idx.resize(d);
  return idx;
}

/// Draws gene subsets until the thresholded precision is positive definite.
GeneModel draw_gene_model(const Matrix& expr, std::size_t d, double delta,
                          const std::function<std::uint64_t(int)>& seed_for_draw) {
  for (int draw = 0; draw < kMaxSubsetDraws; ++draw) {
    Rng rng(seed_for_draw(draw));
    const auto genes = choose_genes(expr.cols(), d, rng);
    Dataset sub;
    sub.rows = Matrix(expr.rows(), d);
    for (std::size_t s = 0; s < expr.rows(); ++s)
      for (std::size_t j = 0; j < d; ++j) sub.rows(s, j) = expr(s, genes[j]);
    const SymMatrix c0 = sample_covariance(standardize(sub));
    try {
      return {gene_model_from_correlation(c0, delta), draw + 1};
    } catch (const NotPositiveDefinite&) {
    }
  }
  throw NotPositiveDefinite("no positive definite thresholded model in " + std::to_string(kMaxSubsetDraws) +
                            " subset draws");
}

void check_gene_dims(const SweepConfig& cfg, const Matrix& expr) {
  for (double g : cfg.grid)
    if (static_cast<std::size_t>(g) > expr.cols())
      throw std::invalid_argument("subset size " + format_number(g) + " exceeds the " +
                                  std::to_string(expr.cols()) + " usable genes");
  if (expr.rows() < 2) throw std::invalid_argument("expression data needs at least two samples");
}

SweepRecord gene_proto(const SweepConfig& cfg, double grid, std::size_t n, std::size_t rep, std::uint64_t seed) {
  SweepRecord r;
  r.experiment = std::string(experiment_name(cfg.experiment));
  r.grid = grid;
  r.n = n;
  r.replicate = rep;
  r.seed = seed;
  r.dim = static_cast<std::size_t>(grid);
  return r;
}

}  // namespace

Matrix load_gene_expression(const SweepConfig& cfg) {
  if (cfg.expression_file.empty()) {
    Rng rng(cfg.synthetic_seed);
    return synthetic_expression(cfg.synthetic_samples, cfg.synthetic_genes, cfg.synthetic_rank, cfg.synthetic_noise,
                                rng);
  }
  ExpressionLayout layout;
  layout.genes_in_columns = !cfg.genes_in_rows;
  layout.header = cfg.expression_header;
  layout.row_labels = cfg.expression_row_labels;
  return read_expression_file(cfg.expression_file, layout).values;
}

SweepTable run_gene_assumption(const SweepConfig& cfg) {
  cfg.validate();
  const Matrix expr = load_gene_expression(cfg);
  check_gene_dims(cfg, expr);
  const std::uint64_t tag = detail::experiment_tag(cfg.experiment);
  const std::size_t count = cfg.grid.size() * cfg.k;
  std::vector<SweepRecord> slots(count);
  parallel_for(count, cfg.threads, [&](std::size_t t) {
    const std::size_t g = t / cfg.k;
    const std::size_t sub = t % cfg.k;
    const auto d = static_cast<std::size_t>(cfg.grid[g]);
    const auto seed_for = [&](int draw) {
      return derive_seed(cfg.seed, {tag, g, sub, static_cast<std::uint64_t>(draw)});
    };
    SweepRecord r = gene_proto(cfg, cfg.grid[g], expr.rows(), sub, seed_for(0));
    try {
      const GeneModel gm = draw_gene_model(expr, d, cfg.delta, seed_for);
      r.seed = seed_for(gm.draws - 1);
      r.attempts = gm.draws;
      r.true_edges = gm.model.support.size();
      r.zero_fraction = zero_fraction(gm.model.support);
      r.gamma = assumption1_gamma(gm.model.precision, gm.model.support);
    } catch (const std::runtime_error& e) {
      std::string why = e.what();
      for (auto& ch : why)
        if (ch == ',' || ch == '\n') ch = ';';
      r.status = "failed: " + why;
      r.attempts = kMaxSubsetDraws;
    }
    slots[t] = std::move(r);
  });
  sort_records(slots);
  return slots;
}

SweepTable run_gene_precision(const SweepConfig& cfg) {
  cfg.validate();
  const Matrix expr = load_gene_expression(cfg);
  check_gene_dims(cfg, expr);
  const std::uint64_t tag = detail::experiment_tag(cfg.experiment);
  const std::size_t count = cfg.grid.size() * cfg.k;
  std::vector<std::vector<SweepRecord>> slots(count);
  parallel_for(count, cfg.threads, [&](std::size_t t) {
    const std::size_t g = t / cfg.k;
    const std::size_t rep = t % cfg.k;
    const auto d = static_cast<std::size_t>(cfg.grid[g]);
    std::vector<SweepRecord> rows;
    // one gene model per (d, replicate), shared by every sample size
    for (std::size_t ni = 0; ni < cfg.n.size(); ++ni) {
      const std::size_t n = cfg.n[ni];
      const auto body = [&](int attempt) {
        const auto a = static_cast<std::uint64_t>(attempt);
        const GeneModel gm = draw_gene_model(expr, d, cfg.delta, [&](int draw) {
          return derive_seed(cfg.seed, {tag, 0, g, rep, a, static_cast<std::uint64_t>(draw)});
        });
        const std::uint64_t data_seed = derive_seed(cfg.seed, {tag, 1, g, ni, rep, a});
        Rng rng(data_seed);
        const SymMatrix s = sample_covariance(standardize(sample_mvn(gm.model.covariance, n, rng)));
        const double zf = zero_fraction(gm.model.support);
        std::vector<SweepRecord> out;
        for (Method m : cfg.methods) {
          SweepRecord r = detail::score_method(m, s, gm.model.support, cfg, gene_proto(cfg, cfg.grid[g], n, rep, data_seed));
          r.zero_fraction = zf;
          out.push_back(std::move(r));
        }
        return out;
      };
      auto part = detail::with_retries(body, [&] {
        return detail::failed_rows(cfg, gene_proto(cfg, cfg.grid[g], n, rep, derive_seed(cfg.seed, {tag, 1, g, ni, rep, 0})));
      });
      for (auto& r : part) rows.push_back(std::move(r));
    }
    slots[t] = std::move(rows);
  });
  SweepTable rows;
  for (auto& s : slots)
    for (auto& r : s) rows.push_back(std::move(r));
  sort_records(rows);
  return rows;
}

}  // namespace precis
