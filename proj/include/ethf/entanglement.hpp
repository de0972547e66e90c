#pragma once

#include <vector>

#include "ethf/model.hpp"

namespace ethf {

// Subsystem = sorted set of site indices.
struct Subsystem {
  std::vector<int> sites;  // strictly increasing

  int size() const { return static_cast<int>(sites.size()); }
  void validate(int n_sites) const;
  static Subsystem contiguous(int start, int m);
};

// Natural-log binary entropy -p log p - (1-p) log(1-p); p is clamped into
// [0,1] with 1e-12 slack, values further outside are rejected.
double binary_entropy(double p);

// Entanglement entropy from the restricted correlation matrix: restrict C to
// the subsystem, diagonalize, clamp eigenvalues into [0,1] (tolerance 1e-10),
// sum binary entropies.
double entanglement_entropy(const CorrelationMatrix& c, const Subsystem& sub);

// Independent brute-force oracle (N <= 12): builds the many-body state in the
// full 2^N occupation basis with Jordan-Wigner signs, traces out the
// complement of sub, and returns the von Neumann entropy of the reduced
// density matrix.
double exact_reduced_entropy(const FreeFermionModel& model, const EigenstateSpec& spec,
                             const Subsystem& sub);

// Ensemble-averaged entropy predictions.
// Single particle, m <= N/2:  h(m/N) - 1/(2(N-m)).
double predicted_entropy_single(int n_sites, int m);
// Np particles, m <~ Np:  m h(Np/N) - m^2/(2(N-Np)).
double predicted_entropy_multi(int n_sites, int n_particles, int m);

}  // namespace ethf
