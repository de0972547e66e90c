#include "ethf/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ethf/rng.hpp"

namespace ethf {

double ModelParams::radius() const { return 2.0 * std::sqrt(static_cast<double>(n_sites)) * eta; }

void ModelParams::validate() const {
  if (n_sites < 1) throw std::invalid_argument("ModelParams: n_sites must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("ModelParams: eta must be > 0");
  if (!(alpha > radius()))
    throw std::invalid_argument("ModelParams: alpha must exceed the band radius 2 sqrt(N) eta = " +
                                std::to_string(radius()));
}

void EigenstateSpec::validate(int n_sites) const {
  int prev = -1;
  for (int a : occupied) {
    if (a < 0 || a >= n_sites)
      throw std::invalid_argument("EigenstateSpec: mode index out of range");
    if (a <= prev)
      throw std::invalid_argument("EigenstateSpec: occupied modes must be strictly increasing");
    prev = a;
  }
}

double CorrelationMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim(); ++i) t += entries(i, i);
  return t;
}

FreeFermionModel build_model(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  const SymmetricMatrix v = sample_goe(params.n_sites, params.eta, seed);
  EigenSystem sys = eigendecompose_symmetric(v);
  FreeFermionModel model;
  model.params = params;
  model.energies = sys.values.array() + params.alpha;
  model.modes = std::move(sys.vectors);
  model.spectrum_flagged = model.energies.minCoeff() <= 0.0;
  return model;
}

EigenstateSpec sample_occupation(int n_sites, int n_particles, std::uint64_t seed) {
  if (n_particles < 0 || n_particles > n_sites)
    throw std::invalid_argument("sample_occupation: need 0 <= n_particles <= n_sites");
  Rng rng(seed);
  std::vector<int> pool(n_sites);
  std::iota(pool.begin(), pool.end(), 0);
  // partial Fisher-Yates: the first n_particles slots end up a uniform subset
  for (int k = 0; k < n_particles; ++k) {
    const auto j = k + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_sites - k)));
    std::swap(pool[k], pool[j]);
  }
  EigenstateSpec spec;
  spec.occupied.assign(pool.begin(), pool.begin() + n_particles);
  std::sort(spec.occupied.begin(), spec.occupied.end());
  return spec;
}

double eigenstate_energy(const FreeFermionModel& model, const EigenstateSpec& spec) {
  spec.validate(model.params.n_sites);
  double e = 0.0;
  for (int a : spec.occupied) e += model.energies[a];
  return e;
}

CorrelationMatrix correlation_matrix(const FreeFermionModel& model, const EigenstateSpec& spec) {
  spec.validate(model.params.n_sites);
  const int n = model.params.n_sites;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int a : spec.occupied) {
    const auto psi = model.modes.col(a);
    c.selfadjointView<Eigen::Lower>().rankUpdate(psi, 1.0);
  }
  return CorrelationMatrix{SymmetricMatrix::from_lower(c)};
}

EigenstateSpec particle_hole_complement(const EigenstateSpec& spec, int n_sites) {
  spec.validate(n_sites);
  std::vector<bool> taken(n_sites, false);
  for (int a : spec.occupied) taken[a] = true;
  EigenstateSpec out;
  out.occupied.reserve(n_sites - spec.particle_count());
  for (int a = 0; a < n_sites; ++a)
    if (!taken[a]) out.occupied.push_back(a);
  return out;
}

}  // namespace ethf
