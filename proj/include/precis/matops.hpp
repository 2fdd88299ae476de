#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace precis {

class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveDiagonal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Relative pivot floor for Cholesky: a pivot at or below
/// kPdEpsilon * max(diag) is treated as loss of positive definiteness.
inline constexpr double kPdEpsilon = 1e-12;

/// Dense row-major rows x cols matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  Matrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Dense symmetric p x p matrix. Both triangles are stored and kept equal;
/// every mutation goes through set(), which writes the mirrored entry too.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim, double fill = 0.0);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// Throws std::invalid_argument unless m is square, exactly symmetric and finite.
  static SymMatrix from_dense(const Matrix& m);
  /// Builds from a square matrix by averaging the two triangles.
  static SymMatrix symmetrized(const Matrix& m);
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    return from_dense(Matrix::from_rows(rows));
  }

  std::size_t dim() const { return full_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return full_(i, j); }
  void set(std::size_t i, std::size_t j, double v);
  std::span<const double> row(std::size_t i) const { return full_.row(i); }

  const Matrix& dense() const { return full_; }

 private:
  Matrix full_;
};

SymMatrix operator*(double s, const SymMatrix& m);
Matrix operator*(const SymMatrix& a, const SymMatrix& b);

/// Unordered off-diagonal pair set; the diagonal is implicitly in-support.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  /// Inserts {i, j}; self pairs are ignored.
  void insert(std::size_t i, std::size_t j);
  bool contains(std::size_t i, std::size_t j) const;

  /// Pairs as (i, j) with i < j in lexicographic order.
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }

  bool operator==(const SupportSet& other) const = default;

  static std::size_t max_pairs(std::size_t dim) { return dim * (dim - (dim > 0 ? 1 : 0)) / 2; }

  /// Off-diagonal entries with |m_ij| > eps.
  static SupportSet from_matrix(const SymMatrix& m, double eps);

 private:
  std::size_t dim_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;  // sorted, i < j
};

/// Lower-triangular L with L * L^T = m. Throws NotPositiveDefinite when a
/// pivot falls to kPdEpsilon * max(diag) or below.
Matrix cholesky(const SymMatrix& m);

/// Solves L L^T x = b in place.
void cholesky_solve(const Matrix& lower, std::span<double> b);

SymMatrix invert(const SymMatrix& m);

/// Inverse of a general square matrix via partially pivoted elimination.
Matrix invert_general(const Matrix& m);

double log_det(const SymMatrix& m);

double norm_l1_all(const SymMatrix& m);
double norm_l1_offdiag(const SymMatrix& m);
/// Elementwise maximum |a_ij|.
double norm_max_abs(const Matrix& m);
inline double norm_max_abs(const SymMatrix& m) { return norm_max_abs(m.dense()); }
/// max_j sum_i |a_ij| (absolute column sums).
double norm_inf_rowsum(const Matrix& m);
inline double norm_inf_rowsum(const SymMatrix& m) { return norm_inf_rowsum(m.dense()); }
/// max_i sum_j |a_ij| (absolute row sums).
double norm_inf_by_rows(const Matrix& m);

double trace(const Matrix& m);

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

SymMatrix to_correlation(const SymMatrix& m);

/// Ordered pair (i, j); its position in the row-major p^2 vectorisation is i * p + j.
using PairIndex = std::pair<std::size_t, std::size_t>;

/// Block of Gamma = sigma (x) sigma with rows indexed by `rows` and columns by
/// `cols`: entry ((i,j),(k,l)) = sigma_ik * sigma_jl.
Matrix kron_subblock(const SymMatrix& sigma, std::span<const PairIndex> rows,
                     std::span<const PairIndex> cols);

/// Whitespace- or comma-separated rows, one line per row; '#' starts a comment.
Matrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Matrix& m);
inline void write_matrix(std::ostream& out, const SymMatrix& m) { write_matrix(out, m.dense()); }
Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace precis
