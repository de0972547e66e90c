#include "ethf/entanglement.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace ethf {

void Subsystem::validate(int n_sites) const {
  int prev = -1;
  for (int i : sites) {
    if (i < 0 || i >= n_sites) throw std::invalid_argument("Subsystem: site index out of range");
    if (i <= prev) throw std::invalid_argument("Subsystem: sites must be strictly increasing");
    prev = i;
  }
}

Subsystem Subsystem::contiguous(int start, int m) {
  if (start < 0 || m < 0) throw std::invalid_argument("Subsystem::contiguous: negative argument");
  Subsystem sub;
  sub.sites.resize(m);
  std::iota(sub.sites.begin(), sub.sites.end(), start);
  return sub;
}

double binary_entropy(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12)
    throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

double entanglement_entropy(const CorrelationMatrix& c, const Subsystem& sub) {
  sub.validate(c.dim());
  const int m = sub.size();
  if (m == 0) return 0.0;
  Eigen::MatrixXd restricted(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) restricted(i, j) = c(sub.sites[i], sub.sites[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("entanglement_entropy: eigensolver failed to converge");
  double s = 0.0;
  for (double nu : solver.eigenvalues()) {
    if (nu < -1e-10 || nu > 1.0 + 1e-10)
      throw std::runtime_error("entanglement_entropy: restricted eigenvalue outside [0,1]");
    s += binary_entropy(std::min(1.0, std::max(0.0, nu)));
  }
  return s;
}

double exact_reduced_entropy(const FreeFermionModel& model, const EigenstateSpec& spec,
                             const Subsystem& sub) {
  const int n = model.params.n_sites;
  if (n > 12) throw std::invalid_argument("exact_reduced_entropy: limited to n_sites <= 12");
  spec.validate(n);
  sub.validate(n);
  const std::uint32_t dim = 1u << n;

  // |Psi> = d_{a1}^dag d_{a2}^dag ... |0> with a1 < a2 < ..., built by applying
  // the rightmost factor first; c_i^dag on |mask> carries the Jordan-Wigner
  // sign (-1)^{#occupied sites below i}
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(dim);
  psi[0] = 1.0;
  for (auto it = spec.occupied.rbegin(); it != spec.occupied.rend(); ++it) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(dim);
    for (std::uint32_t mask = 0; mask < dim; ++mask) {
      const double amp = psi[mask];
      if (amp == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) continue;
        const double sign = std::popcount(mask & ((1u << i) - 1)) % 2 == 0 ? 1.0 : -1.0;
        next[mask | (1u << i)] += sign * model.modes(i, *it) * amp;
      }
    }
    psi.swap(next);
  }

  std::vector<int> rank_a(n, -1), rank_b(n, -1);
  for (int k = 0; k < sub.size(); ++k) rank_a[sub.sites[k]] = k;
  int mb = 0;
  for (int i = 0; i < n; ++i)
    if (rank_a[i] < 0) rank_b[i] = mb++;
  const int ma = sub.size();

  // amplitude matrix over (A occupation, B occupation); moving all A-site
  // creation operators in front of the B-site ones costs one transposition per
  // occupied pair b < a with b in B, a in A
  Eigen::MatrixXd amp_matrix = Eigen::MatrixXd::Zero(1u << ma, 1u << mb);
  for (std::uint32_t mask = 0; mask < dim; ++mask) {
    const double amp = psi[mask];
    if (amp == 0.0) continue;
    std::uint32_t ia = 0, ib = 0;
    int swaps = 0, b_seen = 0;
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (rank_a[i] >= 0) {
        ia |= 1u << rank_a[i];
        swaps += b_seen;
      } else {
        ib |= 1u << rank_b[i];
        ++b_seen;
      }
    }
    amp_matrix(ia, ib) = swaps % 2 == 0 ? amp : -amp;
  }

  const Eigen::MatrixXd gram = ma <= mb ? Eigen::MatrixXd(amp_matrix * amp_matrix.transpose())
                                        : Eigen::MatrixXd(amp_matrix.transpose() * amp_matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("exact_reduced_entropy: eigensolver failed to converge");
  double s = 0.0;
  for (double p : solver.eigenvalues())
    if (p > 1e-14) s -= p * std::log(p);
  return s;
}

double predicted_entropy_single(int n_sites, int m) {
  if (n_sites < 1) throw std::invalid_argument("predicted_entropy_single: n_sites must be >= 1");
  if (m < 1 || 2 * m > n_sites)
    throw std::invalid_argument("predicted_entropy_single: need 1 <= m <= N/2");
  const double f = static_cast<double>(m) / n_sites;
  return binary_entropy(f) - 0.5 / (n_sites - m);
}

double predicted_entropy_multi(int n_sites, int n_particles, int m) {
  if (n_particles < 1 || n_particles > n_sites - 1)
    throw std::invalid_argument("predicted_entropy_multi: need 1 <= Np <= N-1");
  if (m < 1) throw std::invalid_argument("predicted_entropy_multi: need m >= 1");
  const double s1 = binary_entropy(static_cast<double>(n_particles) / n_sites);
  return m * s1 - 0.5 * m * static_cast<double>(m) / (n_sites - n_particles);
}

}  // namespace ethf
