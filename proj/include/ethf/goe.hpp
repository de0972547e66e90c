#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ethf {

// Real symmetric matrix stored as one (lower) triangle, so the symmetry
// invariant holds exactly by construction.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n);

  int dim() const { return n_; }

  double operator()(int i, int j) const {
    return i >= j ? tri_[idx(i, j)] : tri_[idx(j, i)];
  }
  void set(int i, int j, double v) {
    if (i >= j)
      tri_[idx(i, j)] = v;
    else
      tri_[idx(j, i)] = v;
  }

  Eigen::MatrixXd dense() const;

  // Takes the lower triangle of m; the upper triangle is ignored.
  static SymmetricMatrix from_lower(const Eigen::MatrixXd& m);

 private:
  static std::size_t idx(int i, int j) {
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }
  int n_ = 0;
  std::vector<double> tri_;
};

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column a is the a-th eigenvector
};

// GOE sample: off-diagonal entries N(0, sigma^2), diagonal N(0, 2 sigma^2).
// Deterministic given seed.
SymmetricMatrix sample_goe(int n, double sigma, std::uint64_t seed);

// Wigner semicircle density 2/(pi R^2) sqrt(R^2 - lambda^2) on [-R, R].
double semicircle_pdf(double lambda, double radius);
double semicircle_cdf(double lambda, double radius);
// k-th moment: 0 for odd k, Catalan(k/2) (R/2)^k for even k.
double semicircle_moment(int k, double radius);

struct SemicircleLaw {
  double radius = 0.0;
  double pdf(double lambda) const { return semicircle_pdf(lambda, radius); }
  double cdf(double lambda) const { return semicircle_cdf(lambda, radius); }
  double moment(int k) const { return semicircle_moment(k, radius); }
};

// Dense symmetric eigendecomposition. Eigenvalues ascending, eigenvectors
// orthonormal, sign fixed so the first component with |v_i| > 1e-12 is
// positive. Throws std::runtime_error if the solver does not converge.
EigenSystem eigendecompose_symmetric(const SymmetricMatrix& m);

}  // namespace ethf
