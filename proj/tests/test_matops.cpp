#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "precis/matops.hpp"

using namespace precis;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

Matrix identity_matrix(std::size_t p) { return SymMatrix::identity(p).dense(); }

SymMatrix random_spd(std::size_t p, std::mt19937_64& eng) {
  std::normal_distribution<double> nd;
  Matrix g(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) g(i, j) = nd(eng);
  const Matrix gtg = g.transpose() * g;
  SymMatrix m(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) m.set(i, j, gtg(i, j) + (i == j ? 1.0 : 0.0));
  return m;
}

}  // namespace

TEST_SUITE("matops") {
  TEST_CASE("SymMatrix keeps both triangles equal") {
    SymMatrix m(3);
    m.set(0, 2, 1.5);
    CHECK(m(2, 0) == 1.5);
    CHECK_THROWS_AS(m.set(0, 1, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(SymMatrix::from_rows({{1, 2}, {3, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(SymMatrix::from_dense(Matrix(2, 3)), DimensionMismatch);
  }

  TEST_CASE("SupportSet stores unordered off-diagonal pairs") {
    SupportSet s(4);
    s.insert(2, 1);
    s.insert(1, 2);
    s.insert(3, 3);
    CHECK(s.size() == 1);
    CHECK(s.contains(1, 2));
    CHECK(s.contains(2, 1));
    CHECK(s.contains(0, 0));
    CHECK_FALSE(s.contains(0, 3));
    CHECK(SupportSet::max_pairs(4) == 6);
    CHECK(SupportSet::max_pairs(1) == 0);
  }

  TEST_CASE("cholesky examples") {
    const Matrix l = cholesky(SymMatrix::from_rows({{4, 2}, {2, 5}}));
    CHECK(l(0, 0) == doctest::Approx(2));
    CHECK(l(0, 1) == 0.0);
    CHECK(l(1, 0) == doctest::Approx(1));
    CHECK(l(1, 1) == doctest::Approx(2));
    CHECK(max_abs_diff(cholesky(SymMatrix::identity(3)), identity_matrix(3)) == 0.0);
    CHECK_THROWS_AS(cholesky(SymMatrix::from_rows({{1, 2}, {2, 1}})), NotPositiveDefinite);
  }

  TEST_CASE("cholesky reproduces the input") {
    std::mt19937_64 eng(11);
    for (int t = 0; t < 20; ++t) {
      const SymMatrix m = random_spd(8, eng);
      const Matrix l = cholesky(m);
      const Matrix llt = l * l.transpose();
      CHECK(max_abs_diff(llt, m.dense()) <= 1e-10 * norm_max_abs(m));
    }
  }

  TEST_CASE("invert examples") {
    CHECK(max_abs_diff(invert(SymMatrix::identity(4)).dense(), identity_matrix(4)) == 0.0);
    const SymMatrix inv = invert(SymMatrix::from_rows({{1, 2}, {2, 5}}));
    CHECK(inv(0, 0) == doctest::Approx(5));
    CHECK(inv(0, 1) == doctest::Approx(-2));
    CHECK(inv(1, 1) == doctest::Approx(1));
  }

  TEST_CASE("Hilbert(4) inverse against the exact rational inverse") {
    SymMatrix h(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) h.set(i, j, 1.0 / static_cast<double>(i + j + 1));
    const SymMatrix inv = invert(h);
    const auto exact = oracle::hilbert_inverse(4);
    CHECK(exact[0][0] == 16.0);
    CHECK(exact[3][3] == 2800.0);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(inv(i, j) == doctest::Approx(exact[i][j]).epsilon(1e-8));
    Matrix residual = h * inv;
    for (std::size_t i = 0; i < 4; ++i) residual(i, i) -= 1.0;
    CHECK(norm_inf_by_rows(residual) < 1e-6);
  }

  TEST_CASE("invert and log_det round trips") {
    std::mt19937_64 eng(5);
    for (std::size_t p : {1u, 3u, 10u, 25u, 50u}) {
      const SymMatrix m = random_spd(p, eng);
      const SymMatrix back = invert(invert(m));
      CHECK(max_abs_diff(back.dense(), m.dense()) < 1e-6);
      CHECK(std::abs(log_det(m) + log_det(invert(m))) < 1e-8);
      CHECK(max_abs_diff(invert(m) * m, identity_matrix(p)) < 1e-8);
    }
  }

  TEST_CASE("log_det examples") {
    CHECK(log_det(SymMatrix::identity(5)) == 0.0);
    const double d[] = {2.0, 3.0};
    CHECK(log_det(SymMatrix::diagonal(d)) == doctest::Approx(std::log(6.0)));
    CHECK_THROWS_AS(log_det(SymMatrix::from_rows({{1, 2}, {2, 1}})), NotPositiveDefinite);
  }

  TEST_CASE("invert_general") {
    const Matrix m = Matrix::from_rows({{0, 2}, {3, 1}});
    const Matrix inv = invert_general(m);
    CHECK(max_abs_diff(m * inv, identity_matrix(2)) < 1e-15);
    CHECK_THROWS_AS(invert_general(Matrix::from_rows({{1, 2}, {2, 4}})), std::domain_error);
  }

  TEST_CASE("norms") {
    const SymMatrix m = SymMatrix::from_rows({{1, -3}, {-3, 2}});
    CHECK(norm_l1_all(SymMatrix::identity(2)) == 2.0);
    CHECK(norm_l1_all(m) == 9.0);
    CHECK(norm_l1_offdiag(m) == 6.0);
    CHECK(norm_max_abs(m) == 3.0);
    CHECK(norm_inf_rowsum(m) == 5.0);
    // the column-sum and row-sum forms differ on a non-symmetric matrix
    const Matrix a = Matrix::from_rows({{1, 1}, {0, 5}});
    CHECK(norm_inf_rowsum(a) == 6.0);
    CHECK(norm_inf_by_rows(a) == 5.0);
    CHECK(trace(m.dense()) == 3.0);
  }

  TEST_CASE("soft_threshold") {
    CHECK(soft_threshold(0.5, 0.1) == doctest::Approx(0.4));
    CHECK(soft_threshold(-0.05, 0.1) == 0.0);
    CHECK(soft_threshold(-0.5, 0.1) == doctest::Approx(-0.4));
    std::mt19937_64 eng(3);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 1000; ++t) {
      const double x = nd(eng), y = nd(eng), th = std::abs(nd(eng));
      CHECK(soft_threshold(x, 0.0) == x);
      CHECK(std::abs(soft_threshold(x, th) - soft_threshold(y, th)) <= std::abs(x - y) + 1e-15);
    }
  }

  TEST_CASE("to_correlation") {
    const double d[] = {4.0, 9.0};
    CHECK(max_abs_diff(to_correlation(SymMatrix::diagonal(d)).dense(), identity_matrix(2)) == 0.0);
    const SymMatrix r = to_correlation(SymMatrix::from_rows({{4, 2}, {2, 1}}));
    CHECK(r(0, 1) == doctest::Approx(1.0));
    CHECK(r(0, 0) == 1.0);
    const SymMatrix c = oracle::random_correlation(6, 9);
    CHECK(max_abs_diff(to_correlation(c).dense(), c.dense()) < 1e-15);
    CHECK_THROWS_AS(to_correlation(SymMatrix::from_rows({{0, 0}, {0, 1}})), NonPositiveDiagonal);
  }

  TEST_CASE("kron_subblock matches the materialised Kronecker product") {
    const SymMatrix eye = SymMatrix::identity(3);
    std::vector<PairIndex> all;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) all.emplace_back(i, j);
    const Matrix g = kron_subblock(eye, all, all);
    CHECK(max_abs_diff(g, identity_matrix(9)) == 0.0);

    const double rho = 0.3;
    const SymMatrix s2 = SymMatrix::from_rows({{1, rho}, {rho, 1}});
    std::vector<PairIndex> four{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const auto brute2 = oracle::kronecker(oracle::to_dense(s2.dense()));
    const Matrix g2 = kron_subblock(s2, four, four);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) CHECK(g2(a, b) == brute2[a][b]);

    const std::vector<PairIndex> one{{1, 0}};
    const std::vector<PairIndex> other{{0, 1}};
    CHECK(kron_subblock(s2, one, other)(0, 0) == doctest::Approx(rho * rho));

    for (std::size_t p = 2; p <= 6; ++p) {
      const SymMatrix s = oracle::random_correlation(p, 100 + p);
      const auto brute = oracle::kronecker(oracle::to_dense(s.dense()));
      std::vector<PairIndex> pairs;
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) pairs.emplace_back(i, j);
      const Matrix k = kron_subblock(s, pairs, pairs);
      double diff = 0.0;
      for (std::size_t a = 0; a < p * p; ++a)
        for (std::size_t b = 0; b < p * p; ++b) diff = std::max(diff, std::abs(k(a, b) - brute[a][b]));
      CHECK(diff == 0.0);
    }
  }

  TEST_CASE("matrix text round trip") {
    const Matrix m = Matrix::from_rows({{1.0 / 3.0, -2e-300}, {7, 0}});
    std::stringstream ss;
    write_matrix(ss, m);
    const Matrix back = read_matrix(ss);
    CHECK(max_abs_diff(m, back) == 0.0);
    std::stringstream csv("# comment\n1,2\n\n3, 4\n");
    const Matrix c = read_matrix(csv);
    CHECK(c.rows() == 2);
    CHECK(c(1, 1) == 4.0);
    std::stringstream ragged("1 2\n3\n");
    CHECK_THROWS(read_matrix(ragged));
  }
}
