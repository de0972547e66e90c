#include "ethf/goe.hpp"

#include <cmath>
#include <stdexcept>

#include <lapacke.h>

#include "ethf/rng.hpp"

namespace ethf {

SymmetricMatrix::SymmetricMatrix(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("SymmetricMatrix: dimension must be >= 1");
  tri_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
}

Eigen::MatrixXd SymmetricMatrix::dense() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = tri_[idx(i, j)];
  return m;
}

SymmetricMatrix SymmetricMatrix::from_lower(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("from_lower: matrix must be square");
  SymmetricMatrix out(static_cast<int>(m.rows()));
  for (int i = 0; i < out.n_; ++i)
    for (int j = 0; j <= i; ++j) out.tri_[idx(i, j)] = m(i, j);
  return out;
}

SymmetricMatrix sample_goe(int n, double sigma, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_goe: n must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_goe: sigma must be > 0");
  Rng rng(seed);
  SymmetricMatrix m(n);
  const double diag_sigma = sigma * std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      m.set(i, j, (i == j ? diag_sigma : sigma) * rng.normal());
  return m;
}

double semicircle_pdf(double lambda, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("semicircle_pdf: radius must be > 0");
  if (std::abs(lambda) >= radius) return 0.0;
  return 2.0 / (M_PI * radius * radius) * std::sqrt(radius * radius - lambda * lambda);
}

double semicircle_cdf(double lambda, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("semicircle_cdf: radius must be > 0");
  if (lambda <= -radius) return 0.0;
  if (lambda >= radius) return 1.0;
  const double r2 = radius * radius;
  return 0.5 + lambda * std::sqrt(r2 - lambda * lambda) / (M_PI * r2) +
         std::asin(lambda / radius) / M_PI;
}

double semicircle_moment(int k, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("semicircle_moment: radius must be > 0");
  if (k < 0) throw std::invalid_argument("semicircle_moment: k must be >= 0");
  if (k % 2 == 1) return 0.0;
  const int p = k / 2;
  // Catalan(p) = binomial(2p, p)/(p+1), built incrementally to stay exact
  double catalan = 1.0;
  for (int i = 0; i < p; ++i) catalan = catalan * 2.0 * (2 * i + 1) / (i + 2);
  return catalan * std::pow(radius / 2.0, k);
}

EigenSystem eigendecompose_symmetric(const SymmetricMatrix& m) {
  // divide-and-conquer LAPACK driver; ascending eigenvalues, vectors in columns
  const int n = m.dim();
  EigenSystem out{Eigen::VectorXd(n), m.dense()};
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                                  out.values.data());
  if (info != 0)
    throw std::runtime_error("eigendecompose_symmetric: eigensolver failed to converge");
  // reproducible sign: first component with magnitude > 1e-12 made positive
  for (int a = 0; a < out.vectors.cols(); ++a) {
    for (int i = 0; i < out.vectors.rows(); ++i) {
      const double v = out.vectors(i, a);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) out.vectors.col(a) = -out.vectors.col(a);
        break;
      }
    }
  }
  return out;
}

}  // namespace ethf
