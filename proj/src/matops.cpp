#include "precis/matops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace precis {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw DimensionMismatch("ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

SymMatrix::SymMatrix(std::size_t dim, double fill) : full_(dim, dim, fill) {}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.full_(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

SymMatrix SymMatrix::from_dense(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("symmetric matrix must be square");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) throw std::invalid_argument("non-finite matrix entry");
      if (m(i, j) != m(j, i)) throw std::invalid_argument("matrix is not symmetric");
    }
  }
  SymMatrix s;
  s.full_ = m;
  return s;
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("symmetric matrix must be square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
  full_(i, j) = v;
  full_(j, i) = v;
}

SymMatrix operator*(double s, const SymMatrix& m) {
  SymMatrix r(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) r.set(i, j, s * m(i, j));
  return r;
}

Matrix operator*(const SymMatrix& a, const SymMatrix& b) { return a.dense() * b.dense(); }

void SupportSet::insert(std::size_t i, std::size_t j) {
  if (i == j) return;
  if (i >= dim_ || j >= dim_) throw std::out_of_range("support pair index out of range");
  const std::pair<std::size_t, std::size_t> key{std::min(i, j), std::max(i, j)};
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), key);
  if (it == pairs_.end() || *it != key) pairs_.insert(it, key);
}

bool SupportSet::contains(std::size_t i, std::size_t j) const {
  if (i == j) return true;
  const std::pair<std::size_t, std::size_t> key{std::min(i, j), std::max(i, j)};
  return std::binary_search(pairs_.begin(), pairs_.end(), key);
}

SupportSet SupportSet::from_matrix(const SymMatrix& m, double eps) {
  SupportSet s(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j)
      if (std::abs(m(i, j)) > eps) s.pairs_.emplace_back(i, j);
  return s;
}

Matrix cholesky(const SymMatrix& m) {
  const std::size_t p = m.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, m(i, i));
  const double floor = kPdEpsilon * max_diag;

  Matrix lower(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (!(pivot > floor)) {
      throw NotPositiveDefinite("cholesky pivot " + std::to_string(j) + " is " +
                                std::to_string(pivot));
    }
    const double ljj = std::sqrt(pivot);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double v = m(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / ljj;
    }
  }
  return lower;
}

void cholesky_solve(const Matrix& lower, std::span<double> b) {
  const std::size_t p = lower.rows();
  for (std::size_t i = 0; i < p; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= lower(i, k) * b[k];
    b[i] = v / lower(i, i);
  }
  for (std::size_t i = p; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < p; ++k) v -= lower(k, i) * b[k];
    b[i] = v / lower(i, i);
  }
}

SymMatrix invert(const SymMatrix& m) {
  const std::size_t p = m.dim();
  const Matrix lower = cholesky(m);
  Matrix inv(p, p);
  std::vector<double> col(p);
  for (std::size_t j = 0; j < p; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    cholesky_solve(lower, col);
    for (std::size_t i = 0; i < p; ++i) inv(i, j) = col[i];
  }
  return SymMatrix::symmetrized(inv);
}

Matrix invert_general(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) throw std::domain_error("singular matrix");
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a(c, k), a(piv, k));
        std::swap(inv(c, k), inv(piv, k));
      }
    }
    const double d = a(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      a(c, k) /= d;
      inv(c, k) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

double log_det(const SymMatrix& m) {
  const Matrix lower = cholesky(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) acc += std::log(lower(i, i));
  return 2.0 * acc;
}

double norm_l1_all(const SymMatrix& m) {
  double acc = 0.0;
  for (double v : m.dense().data()) acc += std::abs(v);
  return acc;
}

double norm_l1_offdiag(const SymMatrix& m) {
  double acc = norm_l1_all(m);
  for (std::size_t i = 0; i < m.dim(); ++i) acc -= std::abs(m(i, i));
  return acc;
}

double norm_max_abs(const Matrix& m) {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

double norm_inf_rowsum(const Matrix& m) {
  std::vector<double> col(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) col[j] += std::abs(r[j]);
  }
  return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

double norm_inf_by_rows(const Matrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (double v : m.row(i)) acc += std::abs(v);
    best = std::max(best, acc);
  }
  return best;
}

double trace(const Matrix& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) acc += m(i, i);
  return acc;
}

SymMatrix to_correlation(const SymMatrix& m) {
  const std::size_t p = m.dim();
  std::vector<double> scale(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (!(m(i, i) > 0.0)) throw NonPositiveDiagonal("diagonal entry " + std::to_string(i) + " <= 0");
    scale[i] = 1.0 / std::sqrt(m(i, i));
  }
  SymMatrix r(p);
  for (std::size_t i = 0; i < p; ++i) {
    r.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < p; ++j) r.set(i, j, m(i, j) * scale[i] * scale[j]);
  }
  return r;
}

Matrix kron_subblock(const SymMatrix& sigma, std::span<const PairIndex> rows,
                     std::span<const PairIndex> cols) {
  const std::size_t p = sigma.dim();
  Matrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [i, j] = rows[r];
    if (i >= p || j >= p) throw std::out_of_range("kron_subblock row index out of range");
    auto dst = out.row(r);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto [k, l] = cols[c];
      if (k >= p || l >= p) throw std::out_of_range("kron_subblock column index out of range");
      dst[c] = sigma(i, k) * sigma(j, l);
    }
  }
  return out;
}

Matrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw std::runtime_error("bad matrix entry '" + tok + "'");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j) == 0.0 ? 0.0 : m(i, j));  // no "-0"
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix(in);
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_matrix(out, m);
}

}  // namespace precis
