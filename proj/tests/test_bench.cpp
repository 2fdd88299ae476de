#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "precis/bench.hpp"
#include "precis/io.hpp"

using namespace precis;

namespace {

SweepConfig small(Experiment e, std::vector<double> grid, std::size_t k = 2) {
  SweepConfig c;
  c.experiment = e;
  c.grid = std::move(grid);
  c.k = k;
  c.seed = 11;
  return c;
}

std::string records_text(const SweepConfig& cfg, const SweepTable& rows) {
  SweepConfig c = cfg;
  c.apply_defaults();
  std::ostringstream out;
  write_records_csv(out, c, rows);
  return out.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("experiment names") {
    CHECK(experiment_name(Experiment::gene_assumption) == "gene-assumption");
    CHECK(parse_experiment("objective") == Experiment::objective);
    CHECK_THROWS(parse_experiment("fig9"));
  }

  TEST_CASE("defaults and validation") {
    SweepConfig c;
    c.apply_defaults();
    CHECK(c.grid_is_default);
    CHECK(c.grid.size() == default_grid(Experiment::noise).size());
    CHECK(c.methods.size() == 4);
    CHECK(c.penalize_diagonal.value());
    SweepConfig o;
    o.experiment = Experiment::objective;
    o.apply_defaults();
    CHECK_FALSE(o.penalize_diagonal.value());
    CHECK(o.methods.size() == 1);
    SweepConfig gp;
    gp.experiment = Experiment::gene_precision;
    gp.apply_defaults();
    CHECK(gp.n == std::vector<std::size_t>{100, 500, 2000});
    SweepConfig bad = c;
    bad.k = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("config entries") {
    SweepConfig c;
    apply_config_entries(c, {{"seed", "9"}, {"methods", "scio,naive"}, {"grid", "log:0.1:1:3"}, {"sparsity", "0.5"}});
    CHECK(c.seed == 9);
    CHECK(c.methods == std::vector<Method>{Method::scio, Method::naive});
    CHECK(c.grid.size() == 3);
    CHECK(c.a_sparsity == 0.5);
    CHECK_THROWS_AS(apply_config_entries(c, {{"colour", "blue"}}), ParseError);
  }

  TEST_CASE("parallel_for covers every index and rethrows") {
    std::atomic<int> sum{0};
    parallel_for(100, 4, [&](std::size_t i) { sum += static_cast<int>(i); });
    CHECK(sum == 4950);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                      if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }

  TEST_CASE("noise sweep shape, order and naive calibration") {
    const SweepTable rows = run_sweep(small(Experiment::noise, {0.1, 1.0}));
    REQUIRE(rows.size() == 2 * 4 * 2);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& a = rows[i - 1];
      const auto& b = rows[i];
      CHECK((a.grid < b.grid || (a.grid == b.grid && (static_cast<int>(parse_method(a.method)) <
                                                      static_cast<int>(parse_method(b.method)) ||
                                                      (a.method == b.method && a.replicate < b.replicate)))));
    }
    for (const auto& r : rows) {
      CHECK(r.ok());
      CHECK(r.dim == 12);
      if (r.method == "naive") {
        CHECK(r.estimated_edges == r.true_edges);
        CHECK(std::isnan(r.lambda));
      }
    }
    // the same A is shared across the grid for one replicate
    CHECK(rows.front().true_edges == rows[8].true_edges);
  }

  TEST_CASE("sweep output is identical across thread counts") {
    SweepConfig c = small(Experiment::noise, {0.05, 0.5}, 3);
    c.methods = {Method::glasso, Method::naive};
    const std::string one = records_text(c, run_sweep(c));
    c.threads = 3;
    const std::string three = records_text(c, run_sweep(c));
    CHECK(one == three);
    c.seed = 12;
    CHECK(records_text(c, run_sweep(c)) != one);
  }

  TEST_CASE("input dimension sweep down to one latent variable") {
    SweepConfig c = small(Experiment::indim, {1, 3});
    c.methods = {Method::scio};
    const SweepTable rows = run_sweep(c);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].dim == 11);
    CHECK(rows[3].dim == 13);
  }

  TEST_CASE("output dimension sweep") {
    SweepConfig c = small(Experiment::outdim, {4, 6}, 1);
    c.methods = {Method::naive};
    const SweepTable rows = run_sweep(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].dim == 6);
    CHECK(rows[1].dim == 8);
  }

  TEST_CASE("gamma sweep at a tiny scale is perfect") {
    // gamma shrinks with A only relative to the noise level
    const SweepTable rows = run_sweep(small(Experiment::gamma, {0.001}, 3));
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.gamma < 0.3);
      CHECK(r.precision == 1.0);
      CHECK(r.n == 0);
    }
  }

  TEST_CASE("objective decomposition on the identity control is flat") {
    SweepConfig c = small(Experiment::objective, {0.1, 1.0}, 1);
    c.identity_control = true;
    const SweepTable rows = run_sweep(c);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      REQUIRE(r.truth_objective.has_value());
      CHECK(r.truth_objective->log_det_term == 0.0);
      CHECK(r.truth_objective->neg_trace_term == doctest::Approx(-12.0));
      CHECK(r.true_edges == 0);
    }
    CHECK(rows[0].est_objective->total == rows[1].est_objective->total);
  }

  TEST_CASE("objective decomposition on the latent model") {
    const SweepTable rows = run_sweep(small(Experiment::objective, {0.1, 0.3}, 1));
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      REQUIRE(r.truth_objective.has_value());
      CHECK(r.truth_objective->penalty_term > r.penalty_bound);
    }
  }

  TEST_CASE("objective totals converge at large noise") {
    const SweepTable rows = run_sweep(small(Experiment::objective, {10.0}, 3));
    for (const auto& r : rows) {
      REQUIRE(r.ok());
      const double t = r.truth_objective->total;
      CHECK(std::abs(r.est_objective->total - t) <= 0.1 * std::abs(t));
    }
  }

  TEST_CASE("correlation-scale precision") {
    LatentModelSpec spec;
    spec.d1 = 1;
    spec.d2 = 1;
    spec.sigma_eps2 = 1.0;
    spec.A = Matrix::from_rows({{2}});
    const GroundTruthModel m = latent_precision(spec);
    const SymMatrix p = correlation_precision(m);
    const SymMatrix r = invert(to_correlation(m.covariance));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(p(i, j) == doctest::Approx(r(i, j)));
  }

  TEST_CASE("gene pipeline on independent genes sees a diagonal model") {
    const std::string path = "precis_test_independent_genes.tsv";
    {
      Rng rng(3);
      ExpressionMatrix m;
      m.values = Matrix(4000, 12);
      for (std::size_t g = 0; g < 12; ++g) m.genes.push_back("g" + std::to_string(g));
      for (std::size_t i = 0; i < 4000; ++i)
        for (std::size_t g = 0; g < 12; ++g) m.values(i, g) = rng.normal();
      std::ofstream out(path);
      write_expression(out, m);
    }
    SweepConfig c = small(Experiment::gene_assumption, {5, 10}, 3);
    c.expression_file = path;
    const SweepTable rows = run_sweep(c);
    std::remove(path.c_str());
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
      CHECK(r.ok());
      CHECK(r.gamma == 0.0);
      CHECK(r.zero_fraction == 1.0);
      CHECK(r.method.empty());
    }
  }

  TEST_CASE("gene subset larger than the gene count is rejected") {
    SweepConfig c = small(Experiment::gene_assumption, {50}, 1);
    c.synthetic_genes = 20;
    CHECK_THROWS(run_sweep(c));
  }

  TEST_CASE("gene precision rows") {
    SweepConfig c = small(Experiment::gene_precision, {5}, 2);
    c.n = {100, 200};
    const SweepTable rows = run_sweep(c);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].n == 100);
    CHECK(rows[2].n == 200);
    // one model per (d, replicate) across the n grid
    CHECK(rows[0].true_edges == rows[2].true_edges);
  }

  TEST_CASE("records and summary CSV layout") {
    SweepConfig c = small(Experiment::noise, {0.5}, 2);
    c.methods = {Method::scio};
    c.apply_defaults();
    const SweepTable rows = run_sweep(c);
    std::ostringstream rec, sum;
    write_records_csv(rec, c, rows);
    write_summary_csv(sum, c, rows);
    const std::string r = rec.str();
    CHECK(r.rfind("# precis-lab v1 noise\n# grid: user\n# seed: 11\nexperiment,grid,", 0) == 0);
    CHECK(count_lines(r) == 4 + 2);
    CHECK(r.find("wall_ms") == std::string::npos);
    CHECK(sum.str().find("\nexperiment,grid,n,method,replicates,failed,") != std::string::npos);
    CHECK(count_lines(sum.str()) == 3 + 2);

    SweepConfig ga = small(Experiment::gene_assumption, {5}, 2);
    ga.apply_defaults();
    std::ostringstream gs;
    write_summary_csv(gs, ga, run_sweep(ga));
    CHECK(gs.str().find("frac_gamma_lt_1") != std::string::npos);
  }
}
