#pragma once

#include <cstdint>
#include <vector>

#include "ethf/goe.hpp"

namespace ethf {

// Hamiltonian ensemble parameters. alpha shifts all single-particle levels,
// eta scales the random coupling matrix; the single-particle band then spans
// roughly alpha +- radius() with radius = 2 sqrt(N) eta.
struct ModelParams {
  int n_sites = 0;
  double alpha = 0.0;
  double eta = 0.0;

  double radius() const;
  // throws std::invalid_argument unless n_sites >= 1, eta > 0 and
  // alpha > radius() (positive single-particle spectrum)
  void validate() const;
};

// One diagonalized realization: energies[a] = alpha + eps_a ascending,
// modes.col(a) the corresponding orthonormal single-particle mode.
struct FreeFermionModel {
  ModelParams params;
  Eigen::VectorXd energies;
  Eigen::MatrixXd modes;
  bool spectrum_flagged = false;  // some energy <= 0 (fluctuation beyond the band edge)
};

// Occupied mode set labeling a many-body eigenstate.
struct EigenstateSpec {
  std::vector<int> occupied;  // strictly increasing, all in [0, N)

  int particle_count() const { return static_cast<int>(occupied.size()); }
  void validate(int n_sites) const;
};

// Correlation matrix <c_i^dag c_j>; symmetric with eigenvalues in [0,1],
// a rank-Np projector for pure eigenstates.
struct CorrelationMatrix {
  SymmetricMatrix entries;

  int dim() const { return entries.dim(); }
  double operator()(int i, int j) const { return entries(i, j); }
  double trace() const;
  Eigen::MatrixXd dense() const { return entries.dense(); }
};

FreeFermionModel build_model(const ModelParams& params, std::uint64_t seed);

// Uniformly random Np-subset of [0, N), deterministic given seed.
EigenstateSpec sample_occupation(int n_sites, int n_particles, std::uint64_t seed);

// Sum of occupied single-particle energies.
double eigenstate_energy(const FreeFermionModel& model, const EigenstateSpec& spec);

// C = sum_{a in occupied} psi^a (psi^a)^T
CorrelationMatrix correlation_matrix(const FreeFermionModel& model, const EigenstateSpec& spec);

EigenstateSpec particle_hole_complement(const EigenstateSpec& spec, int n_sites);

}  // namespace ethf
