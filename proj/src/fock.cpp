#include "ethf/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "ethf/rng.hpp"

namespace ethf {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

std::ptrdiff_t FockSector::index_of(std::uint32_t mask) const {
  const auto it = std::lower_bound(basis.begin(), basis.end(), mask);
  if (it == basis.end() || *it != mask) return -1;
  return it - basis.begin();
}

FockSector build_sector(int n_sites, int n_particles, std::uint64_t cap) {
  if (n_sites < 1 || n_sites > 24)
    throw std::invalid_argument("build_sector: n_sites must lie in [1, 24]");
  if (n_particles < 0 || n_particles > n_sites)
    throw std::invalid_argument("build_sector: n_particles must lie in [0, n_sites]");
  const std::uint64_t dim = binomial(n_sites, n_particles);
  if (dim > cap) throw std::invalid_argument("build_sector: sector dimension exceeds cap");
  FockSector sector{n_sites, n_particles, {}};
  sector.basis.reserve(dim);
  for (std::uint32_t mask = 0; mask < (1u << n_sites); ++mask)
    if (std::popcount(mask) == n_particles) sector.basis.push_back(mask);
  return sector;
}

std::optional<Hop> hopping_element(std::uint32_t state, int i, int j) {
  const std::uint32_t bj = 1u << j;
  if (!(state & bj)) return std::nullopt;
  if (i == j) return Hop{state, 1};
  const std::uint32_t bi = 1u << i;
  if (state & bi) return std::nullopt;
  const int lo = std::min(i, j), hi = std::max(i, j);
  const std::uint32_t between = ((1u << hi) - 1) & ~((1u << (lo + 1)) - 1);
  const int crossings = std::popcount(state & between);
  return Hop{(state & ~bj) | bi, crossings % 2 == 0 ? 1 : -1};
}

std::size_t SectorOperator::nnz() const {
  std::size_t out = 0;
  for (std::int32_t r : row) out += r >= 0;
  return out;
}

double SectorOperator::quadratic_form(const Eigen::VectorXd& psi) const {
  if (psi.size() != static_cast<Eigen::Index>(row.size()))
    throw std::invalid_argument("SectorOperator: vector length does not match sector dimension");
  double out = 0.0;
  for (std::size_t col = 0; col < row.size(); ++col)
    if (row[col] >= 0) out += psi[row[col]] * value[col] * psi[col];
  return out;
}

Eigen::MatrixXd SectorOperator::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_rows, static_cast<Eigen::Index>(row.size()));
  for (std::size_t col = 0; col < row.size(); ++col)
    if (row[col] >= 0) m(row[col], static_cast<Eigen::Index>(col)) = value[col];
  return m;
}

SectorOperator sector_number_operator(const FockSector& sector, int i, int j) {
  if (i < 0 || i >= sector.n_sites || j < 0 || j >= sector.n_sites)
    throw std::invalid_argument("sector_number_operator: site index out of range");
  SectorOperator op;
  op.n_rows = static_cast<int>(sector.dim());
  op.row.assign(sector.dim(), -1);
  op.value.assign(sector.dim(), 0.0);
  for (std::size_t col = 0; col < sector.dim(); ++col) {
    const auto hop = hopping_element(sector.basis[col], i, j);
    if (!hop) continue;
    op.row[col] = static_cast<std::int32_t>(sector.index_of(hop->state));
    op.value[col] = hop->sign;
  }
  return op;
}

Eigen::VectorXd sample_haar_vector(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("sample_haar_vector: dim must be >= 1");
  Rng rng(seed);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.normal();
  return v / v.norm();
}

CorrelationMatrix random_state_correlation(const FockSector& sector, const Eigen::VectorXd& psi) {
  if (psi.size() != static_cast<Eigen::Index>(sector.dim()))
    throw std::invalid_argument("random_state_correlation: vector length mismatch");
  const int n = sector.n_sites;
  SymmetricMatrix c(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = 0.0;
      for (std::size_t col = 0; col < sector.dim(); ++col) {
        const auto hop = hopping_element(sector.basis[col], i, j);
        if (!hop) continue;
        sum += psi[sector.index_of(hop->state)] * hop->sign * psi[col];
      }
      c.set(i, j, sum);
    }
  }
  return CorrelationMatrix{std::move(c)};
}

SectorSpectrum sample_sector_hamiltonian(const FockSector& sector, double alpha, double etabar,
                                         std::uint64_t seed, std::size_t dense_cap) {
  const std::size_t dim = sector.dim();
  if (dim > dense_cap)
    throw std::invalid_argument("sample_sector_hamiltonian: sector dimension exceeds dense cap");
  if (etabar < 0.0) throw std::invalid_argument("sample_sector_hamiltonian: etabar must be >= 0");
  const double shift = sector.n_particles * alpha;
  const auto d = static_cast<Eigen::Index>(dim);
  if (etabar == 0.0)
    return SectorSpectrum{Eigen::VectorXd::Constant(d, shift), Eigen::MatrixXd::Identity(d, d)};
  EigenSystem sys = eigendecompose_symmetric(sample_goe(static_cast<int>(dim), etabar, seed));
  return SectorSpectrum{sys.values.array() + shift, std::move(sys.vectors)};
}

double match_etabar(const ModelParams& params, int n_particles) {
  params.validate();
  if (n_particles < 1 || n_particles > params.n_sites - 1)
    throw std::invalid_argument("match_etabar: need 1 <= n_particles <= N-1");
  const double dim = static_cast<double>(binomial(params.n_sites, n_particles));
  return params.eta * std::sqrt(n_particles * params.n_sites / dim);
}

}  // namespace ethf
