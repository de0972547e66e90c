#include "ethf/thermal.hpp"

#include <cmath>
#include <stdexcept>

namespace ethf {

double fermi_occupation(double energy, double beta) {
  const double x = beta * energy;
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

ThermalAverages avg_occupation(const ModelParams& params, double beta, int order) {
  params.validate();
  if (beta < 0.0) throw std::invalid_argument("avg_occupation: beta must be >= 0");
  if (order < 2) throw std::invalid_argument("avg_occupation: order must be >= 2");
  if (beta == 0.0) return ThermalAverages{0.0, 0.5, 0.25};
  const double r = params.radius();
  ThermalAverages out;
  out.beta = beta;
  // nodes x_k = cos(k pi/(n+1)) and weights (2/(n+1)) sin^2(k pi/(n+1))
  // integrate f against the normalized semicircle on [-R, R] exactly for
  // polynomial f up to degree 2n-1; the weights sum to 1 by construction.
  for (int k = 1; k <= order; ++k) {
    const double theta = k * M_PI / (order + 1);
    const double s = std::sin(theta);
    const double w = 2.0 / (order + 1) * s * s;
    const double n = fermi_occupation(params.alpha + r * std::cos(theta), beta);
    out.n_mean += w * n;
    out.n_sq_mean += w * n * n;
  }
  return out;
}

ThermalAverages avg_occupation_high_t(const ModelParams& params, double beta) {
  params.validate();
  const double ab = params.alpha * beta;
  return ThermalAverages{beta, 0.5 - ab / 4.0, 0.25 - ab / 4.0};
}

ThermalAverages avg_occupation_low_t(const ModelParams& params, double beta) {
  params.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("avg_occupation_low_t: beta must be > 0");
  const double r = params.radius();
  const double br = beta * r;
  // I1(b R) e^{-alpha beta} = i1e(b R) e^{-beta (alpha - R)}: both factors stay
  // in range because alpha > R
  const double n_mean = 2.0 * bessel_i1_scaled(br) * std::exp(-beta * (params.alpha - r)) / br;
  const double n_sq =
      bessel_i1_scaled(2.0 * br) * std::exp(-2.0 * beta * (params.alpha - r)) / br;
  return ThermalAverages{beta, n_mean, n_sq};
}

double bessel_i1_scaled(double x) {
  if (x < 0.0) return -bessel_i1_scaled(-x);
  if (x < 15.0) {
    // term_k = (x/2) (x^2/4)^k / (k! (k+1)!)
    const double q = x * x / 4.0;
    double term = x / 2.0;
    double sum = term;
    for (int k = 1; k <= 60; ++k) {
      term *= q / (static_cast<double>(k) * (k + 1));
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // asymptotic: I1(x) ~ e^x / sqrt(2 pi x) (1 - 3/(8x) - 15/(128 x^2) - ...),
  // successive terms related by ((2k-1)^2 - 4) / (8 k x). Summed until terms
  // stop shrinking; at the x = 15 switch the smallest term is ~1e-17, so
  // accuracy stays well under 1e-12 relative everywhere on this branch.
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 40; ++k) {
    const double c = (2.0 * k - 1.0) * (2.0 * k - 1.0) - 4.0;
    const double next = term * c / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

double bessel_i1(double x) { return bessel_i1_scaled(x) * std::exp(std::abs(x)); }

CorrelationMatrix thermal_correlation_matrix(const FreeFermionModel& model, double beta) {
  if (beta < 0.0) throw std::invalid_argument("thermal_correlation_matrix: beta must be >= 0");
  const int n = model.params.n_sites;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const double occ = fermi_occupation(model.energies[a], beta);
    c.selfadjointView<Eigen::Lower>().rankUpdate(model.modes.col(a), occ);
  }
  return CorrelationMatrix{SymmetricMatrix::from_lower(c)};
}

double effective_beta(const ModelParams& params, double filling, int order) {
  params.validate();
  if (!(filling > 0.0) || !(filling <= 0.5))
    throw std::invalid_argument("effective_beta: filling must lie in (0, 1/2]");
  const double tol = 1e-10;
  if (std::abs(avg_occupation(params, 0.0, order).n_mean - filling) <= tol) return 0.0;
  // [n](beta) decreases monotonically from 1/2; bracket by doubling
  double lo = 0.0;
  double hi = 1.0 / params.alpha;
  while (avg_occupation(params, hi, order).n_mean > filling) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("effective_beta: failed to bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double val = avg_occupation(params, mid, order).n_mean;
    if (std::abs(val - filling) <= tol) return mid;
    (val > filling ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ethf
