#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ethf/model.hpp"

namespace ethf {

// binomial(n, k) in exact 64-bit arithmetic (n <= 60 or so; plenty here)
std::uint64_t binomial(int n, int k);

// Fixed-particle-number subspace: all N-bit masks with popcount Np, sorted
// ascending so mask -> index lookup is a binary search.
struct FockSector {
  int n_sites = 0;
  int n_particles = 0;
  std::vector<std::uint32_t> basis;

  std::size_t dim() const { return basis.size(); }
  // index of mask in basis, or -1 if absent
  std::ptrdiff_t index_of(std::uint32_t mask) const;
};

FockSector build_sector(int n_sites, int n_particles, std::uint64_t cap = 1000000);

struct Hop {
  std::uint32_t state = 0;
  int sign = 0;  // +1 or -1
};

// c_i^dag c_j applied to an occupation mask. Returns nullopt when the result
// vanishes (j empty, or i occupied with i != j); otherwise the new mask and
// the Jordan-Wigner sign (-1)^{# occupied strictly between i and j}.
std::optional<Hop> hopping_element(std::uint32_t state, int i, int j);

// c_i^dag c_j restricted to a sector. Each basis column maps to at most one
// basis row, so the matrix is stored as one (row, value) pair per column
// with row = -1 marking annihilated columns.
struct SectorOperator {
  int n_rows = 0;
  std::vector<std::int32_t> row;  // per column
  std::vector<double> value;

  std::size_t nnz() const;
  // psi^T M psi
  double quadratic_form(const Eigen::VectorXd& psi) const;
  Eigen::MatrixXd dense() const;
};

SectorOperator sector_number_operator(const FockSector& sector, int i, int j);

// iid standard Gaussians normalized to unit length.
Eigen::VectorXd sample_haar_vector(std::size_t dim, std::uint64_t seed);

// C^r_ij = psi^T M^{(ij)} psi for all i, j.
CorrelationMatrix random_state_correlation(const FockSector& sector, const Eigen::VectorXd& psi);

struct SectorSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

// H_sector = Np alpha I + GOE(dim, etabar), fully diagonalized.
SectorSpectrum sample_sector_hamiltonian(const FockSector& sector, double alpha, double etabar,
                                         std::uint64_t seed, std::size_t dense_cap = 4096);

// etabar = eta sqrt(Np N / binomial(N, Np)): matches the sector-ensemble
// energy variance binomial(N,Np) etabar^2 to the free-fermion value Np N eta^2.
double match_etabar(const ModelParams& params, int n_particles);

}  // namespace ethf
