#pragma once

#include "ethf/model.hpp"

namespace ethf {

// Semicircle-averaged Fermi occupation moments at inverse temperature beta.
struct ThermalAverages {
  double beta = 0.0;
  double n_mean = 0.0;
  double n_sq_mean = 0.0;
};

// 1/(e^{beta E} + 1), overflow-safe for any |beta E|.
double fermi_occupation(double energy, double beta);

// Exact band averages [n_beta] and [(n_beta)^2] by Gauss-Chebyshev (second
// kind) quadrature, whose weight sqrt(R^2 - lambda^2) is the semicircle
// numerator; default order 256 is converged to machine precision for
// beta * R <= a few hundred.
ThermalAverages avg_occupation(const ModelParams& params, double beta, int order = 256);

// High-temperature linearization: (1/2 - alpha beta/4, 1/4 - alpha beta/4).
// Valid for alpha beta << 1; returned as printed, not clamped.
ThermalAverages avg_occupation_high_t(const ModelParams& params, double beta);

// Boltzmann (low-temperature) closed forms:
//   [n]     = 2 e^{-alpha beta} I1(beta R) / (beta R)
//   [(n)^2] =   e^{-2 alpha beta} I1(2 beta R) / (beta R)
// Accurate once e^{-beta(alpha - R)} is small; evaluated in scaled form so
// large beta R does not overflow.
ThermalAverages avg_occupation_low_t(const ModelParams& params, double beta);

// Modified Bessel function of the first kind, order 1; power series for
// x < 15, exponentially scaled asymptotic series for x >= 15.
double bessel_i1(double x);
// e^{-x} I1(x); never overflows.
double bessel_i1_scaled(double x);

// C^beta = sum_a psi^a (psi^a)^T n_beta(E_a)
CorrelationMatrix thermal_correlation_matrix(const FreeFermionModel& model, double beta);

// Unique beta >= 0 with avg_occupation(beta).n_mean == filling, by bisection;
// filling must lie in (0, 1/2]. Tolerance 1e-10 in the filling.
double effective_beta(const ModelParams& params, double filling, int order = 256);

}  // namespace ethf
