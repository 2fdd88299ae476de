#pragma once

#include <span>
#include <vector>

#include "precis/matops.hpp"

namespace precis {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

struct LpOptions {
  double pivot_eps = 1e-11;
  double feasibility_tol = 1e-9;
  int max_pivots = 100000;
};

/// Dense two-phase tableau simplex for
///   min c^T x  subject to  A x <= b,  x >= 0
/// with b of any sign. Entering and leaving variables follow Bland's rule.
/// The optimal basic solution is re-solved from the original data before it
/// is returned.
LpSolution solve_lp(const Matrix& a, std::span<const double> b, std::span<const double> c,
                    const LpOptions& opts = {});

}  // namespace precis
