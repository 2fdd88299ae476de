#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls the library's factorisations or solvers.

#include <cstddef>
#include <vector>

#include "precis/matops.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

Dense to_dense(const precis::Matrix& m);
Dense multiply(const Dense& a, const Dense& b);
/// Gauss-Jordan with full pivoting; returns empty on singular input.
Dense inverse(const Dense& a);
/// Solves a x = b by Gaussian elimination with partial pivoting; false if singular.
bool solve(Dense a, std::vector<double> b, std::vector<double>& x);

/// Exact inverse of the n x n Hilbert matrix (integer entries).
Dense hilbert_inverse(int n);

/// Gamma = Sigma (x) Sigma materialised as a p^2 x p^2 matrix, index i*p + j.
Dense kronecker(const Dense& sigma);

/// Assumption 1 gamma by brute force: builds the full Kronecker product,
/// selects S from the exact nonzeros of `precision` (diagonal always in),
/// inverts Gamma_SS with `inverse` and takes the max column sum.
double gamma1_bruteforce(const Dense& precision, bool row_sums = false);

/// Assumption 2 gamma from explicit covariance sub-blocks.
double gamma2_reference(const Dense& covariance, const Dense& precision);

/// Minimum of ||beta||_1 subject to |S beta - e_col|_inf <= lambda, by
/// enumerating every vertex of the arrangement made of the 2p constraint
/// facets and the p coordinate planes. Returns -1 when infeasible.
double clime_column_l1(const Dense& s, std::size_t col, double lambda);

/// Random correlation matrix: normalised G^T G + 0.1 I with G ~ N(0,1)^{m x p}.
precis::SymMatrix random_correlation(std::size_t p, std::uint64_t seed, std::size_t m = 0);

}  // namespace oracle
