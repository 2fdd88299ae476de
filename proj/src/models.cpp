#include "precis/models.hpp"

#include <cmath>
#include <string>

namespace precis {

void LatentModelSpec::validate() const {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("latent model needs d1 >= 1 and d2 >= 1");
  if (!(sigma_x2 > 0.0)) throw std::invalid_argument("sigma_x2 must be positive");
  if (!(sigma_eps2 > 0.0)) throw std::invalid_argument("sigma_eps2 must be positive");
  if (A.rows() != d2 || A.cols() != d1) throw DimensionMismatch("A must be d2 x d1");
  for (double v : A.data())
    if (!std::isfinite(v)) throw std::invalid_argument("A has a non-finite entry");
}

SymMatrix latent_covariance(const LatentModelSpec& spec) {
  spec.validate();
  const std::size_t d1 = spec.d1;
  const std::size_t d2 = spec.d2;
  const double sx = spec.sigma_x2;
  const Matrix& a = spec.A;

  SymMatrix c(d1 + d2);
  for (std::size_t i = 0; i < d1; ++i) c.set(i, i, sx);
  for (std::size_t k = 0; k < d2; ++k)
    for (std::size_t i = 0; i < d1; ++i) c.set(d1 + k, i, sx * a(k, i));
  for (std::size_t k = 0; k < d2; ++k) {
    for (std::size_t l = k; l < d2; ++l) {
      double aat = 0.0;
      for (std::size_t i = 0; i < d1; ++i) aat += a(k, i) * a(l, i);
      if (k == l) aat += spec.sigma_eps2;
      c.set(d1 + k, d1 + l, sx * aat);
    }
  }
  return c;
}

GroundTruthModel latent_precision(const LatentModelSpec& spec) {
  spec.validate();
  const std::size_t d1 = spec.d1;
  const std::size_t d2 = spec.d2;
  const Matrix& a = spec.A;
  const double inv_sx = 1.0 / spec.sigma_x2;
  const double inv_se = 1.0 / spec.sigma_eps2;

  GroundTruthModel model;
  model.covariance = latent_covariance(spec);
  model.precision = SymMatrix(d1 + d2);
  model.support = SupportSet(d1 + d2);
  auto& prec = model.precision;

  for (std::size_t i = 0; i < d1; ++i) {
    for (std::size_t j = i; j < d1; ++j) {
      double ata = 0.0;
      bool structural = false;
      for (std::size_t k = 0; k < d2; ++k) {
        ata += a(k, i) * a(k, j);
        structural = structural || (a(k, i) != 0.0 && a(k, j) != 0.0);
      }
      prec.set(i, j, inv_sx * ((i == j ? 1.0 : 0.0) + inv_se * ata));
      if (i != j && structural) model.support.insert(i, j);
    }
  }
  for (std::size_t k = 0; k < d2; ++k) {
    for (std::size_t i = 0; i < d1; ++i) {
      prec.set(d1 + k, i, -inv_sx * inv_se * a(k, i));
      if (a(k, i) != 0.0) model.support.insert(d1 + k, i);
    }
    prec.set(d1 + k, d1 + k, inv_sx * inv_se);
  }
  return model;
}

Matrix random_A(std::size_t d1, std::size_t d2, double scale, double sparsity, Rng& rng) {
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw std::invalid_argument("sparsity must be in [0, 1)");
  Matrix a(d2, d1);
  for (std::size_t k = 0; k < d2; ++k) {
    for (std::size_t i = 0; i < d1; ++i) {
      const double v = scale * rng.normal();
      // draw the mask unconditionally so the value stream does not depend on sparsity
      const bool zeroed = rng.uniform() < sparsity;
      a(k, i) = zeroed ? 0.0 : v;
    }
  }
  return a;
}

Dataset sample_mvn(const SymMatrix& cov, std::size_t n, Rng& rng) {
  const std::size_t p = cov.dim();
  const Matrix lower = cholesky(cov);
  Dataset d;
  d.rows = Matrix(n, p);
  std::vector<double> z(p);
  for (std::size_t r = 0; r < n; ++r) {
    for (auto& v : z) v = rng.normal();
    auto out = d.rows.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= i; ++k) acc += lower(i, k) * z[k];
      out[i] = acc;
    }
  }
  return d;
}

namespace {

std::vector<double> column_means(const Matrix& x) {
  std::vector<double> mean(x.cols(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(r, j);
  for (auto& m : mean) m /= static_cast<double>(x.rows());
  return mean;
}

}  // namespace

Dataset standardize(const Dataset& d) {
  if (d.n() < 2) throw std::invalid_argument("standardize needs at least two rows");
  const auto mean = column_means(d.rows);
  Dataset out;
  out.rows = d.rows;
  out.standardized = true;
  for (std::size_t j = 0; j < d.p(); ++j) {
    double ss = 0.0;
    for (std::size_t r = 0; r < d.n(); ++r) {
      const double c = d.rows(r, j) - mean[j];
      out.rows(r, j) = c;
      ss += c * c;
    }
    const double sd = std::sqrt(ss / static_cast<double>(d.n()));
    if (!(sd > 0.0) || sd <= 1e-14 * (1.0 + std::abs(mean[j])))
      throw ConstantColumn("column " + std::to_string(j) + " is constant");
    for (std::size_t r = 0; r < d.n(); ++r) out.rows(r, j) /= sd;
  }
  // second centring pass removes the rounding residue of the first
  const auto residue = column_means(out.rows);
  for (std::size_t r = 0; r < d.n(); ++r)
    for (std::size_t j = 0; j < d.p(); ++j) out.rows(r, j) -= residue[j];
  return out;
}

SymMatrix sample_covariance(const Dataset& d) {
  if (d.n() < 2) throw std::invalid_argument("sample covariance needs at least two rows");
  const std::size_t p = d.p();
  const auto mean = column_means(d.rows);
  Matrix acc(p, p);
  std::vector<double> c(p);
  for (std::size_t r = 0; r < d.n(); ++r) {
    for (std::size_t j = 0; j < p; ++j) c[j] = d.rows(r, j) - mean[j];
    for (std::size_t i = 0; i < p; ++i) {
      auto row = acc.row(i);
      for (std::size_t j = i; j < p; ++j) row[j] += c[i] * c[j];
    }
  }
  SymMatrix s(p);
  const double inv_n = 1.0 / static_cast<double>(d.n());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) s.set(i, j, acc(i, j) * inv_n);
  return s;
}

GroundTruthModel gene_model_from_correlation(const SymMatrix& c0, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  const SymMatrix full = invert(c0);
  const std::size_t p = full.dim();
  GroundTruthModel model;
  model.precision = SymMatrix(p);
  model.support = SupportSet(p);
  for (std::size_t i = 0; i < p; ++i) {
    model.precision.set(i, i, full(i, i));
    for (std::size_t j = i + 1; j < p; ++j) {
      if (std::abs(full(i, j)) > delta) {
        model.precision.set(i, j, full(i, j));
        model.support.insert(i, j);
      }
    }
  }
  model.covariance = invert(model.precision);  // throws NotPositiveDefinite on rejection
  return model;
}

double zero_fraction(const SupportSet& support) {
  const std::size_t total = SupportSet::max_pairs(support.dim());
  if (total == 0) return 0.0;
  return 1.0 - static_cast<double>(support.size()) / static_cast<double>(total);
}

Matrix synthetic_expression(std::size_t samples, std::size_t genes, std::size_t rank,
                            double noise_sd, Rng& rng) {
  Matrix loadings(genes, rank);
  for (std::size_t g = 0; g < genes; ++g)
    for (std::size_t k = 0; k < rank; ++k) loadings(g, k) = rng.normal();
  std::vector<double> offset(genes), gene_scale(genes);
  for (std::size_t g = 0; g < genes; ++g) {
    offset[g] = 5.0 + 2.0 * rng.normal();
    gene_scale[g] = std::exp(0.5 * rng.normal());
  }
  Matrix x(samples, genes);
  std::vector<double> factor(rank);
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& f : factor) f = rng.normal();
    for (std::size_t g = 0; g < genes; ++g) {
      double v = noise_sd * rng.normal();
      for (std::size_t k = 0; k < rank; ++k) v += loadings(g, k) * factor[k];
      x(s, g) = offset[g] + gene_scale[g] * v;
    }
  }
  return x;
}

}  // namespace precis
