#include <doctest.h>

#include <vector>

#include "precis/lp_simplex.hpp"

using namespace precis;

TEST_SUITE("lp") {
  TEST_CASE("two-variable optimum") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 1}});
    const std::vector<double> b{4, 6}, c{-1, -1};
    const LpSolution s = solve_lp(a, b, c);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x[0] == doctest::Approx(1.6));
    CHECK(s.x[1] == doctest::Approx(1.2));
    CHECK(s.objective == doctest::Approx(-2.8));
  }

  TEST_CASE("lower bounds through negative right-hand sides") {
    // x >= 1, y >= 2, x + y <= 10; minimise x + 3y
    const Matrix a = Matrix::from_rows({{-1, 0}, {0, -1}, {1, 1}});
    const std::vector<double> b{-1, -2, 10}, c{1, 3};
    const LpSolution s = solve_lp(a, b, c);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(7.0));
  }

  TEST_CASE("infeasible and unbounded") {
    const Matrix a1 = Matrix::from_rows({{1}, {-1}});
    const std::vector<double> b1{1, -2}, c1{1};
    CHECK(solve_lp(a1, b1, c1).status == LpStatus::infeasible);
    const Matrix a2 = Matrix::from_rows({{-1}});
    const std::vector<double> b2{1}, c2{-1};
    CHECK(solve_lp(a2, b2, c2).status == LpStatus::unbounded);
  }

  TEST_CASE("Beale's cycling example terminates") {
    const Matrix a = Matrix::from_rows({{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}});
    const std::vector<double> b{0, 0, 1}, c{-0.75, 20, -0.5, 6};
    const LpSolution s = solve_lp(a, b, c);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(-1.25));
  }

  TEST_CASE("shape mismatch and pivot cap") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 1}});
    const std::vector<double> b{4}, c{1, 1};
    CHECK_THROWS_AS(solve_lp(a, b, c), DimensionMismatch);
    LpOptions tight;
    tight.max_pivots = 0;
    const std::vector<double> b2{4, 6}, c2{-1, -1};
    CHECK(solve_lp(a, b2, c2, tight).status == LpStatus::iteration_limit);
  }
}
