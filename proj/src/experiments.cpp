#include "ethf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ethf/entanglement.hpp"
#include "ethf/fock.hpp"
#include "ethf/rng.hpp"
#include "ethf/thermal.hpp"

namespace ethf {

void StatAccumulator::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / count_;
  m2_ += delta * (x - mean_);
}

void StatAccumulator::merge(const StatAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double delta = other.mean_ - mean_;
  const std::size_t total = count_ + other.count_;
  mean_ += delta * (static_cast<double>(other.count_) / total);
  m2_ += other.m2_ +
         delta * delta * static_cast<double>(count_) * other.count_ / total;
  count_ = total;
}

double StatAccumulator::variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double StatAccumulator::std_error() const {
  return count_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

StatAccumulator merge_accumulators(const StatAccumulator& a, const StatAccumulator& b) {
  StatAccumulator out = a;
  out.merge(b);
  return out;
}

const char* mode_name(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::eth_correlators: return "eth-correlators";
    case ExperimentMode::entropy_scan: return "entropy-scan";
    case ExperimentMode::thermal_compare: return "thermal-compare";
    case ExperimentMode::random_fock_compare: return "random-fock-compare";
    case ExperimentMode::spectrum_stats: return "spectrum-stats";
  }
  return "unknown";
}

std::optional<ExperimentMode> parse_mode(const std::string& name) {
  for (ExperimentMode mode :
       {ExperimentMode::eth_correlators, ExperimentMode::entropy_scan,
        ExperimentMode::thermal_compare, ExperimentMode::random_fock_compare,
        ExperimentMode::spectrum_stats})
    if (name == mode_name(mode)) return mode;
  return std::nullopt;
}

int ExperimentConfig::resolved_np() const {
  if (np >= 0) return np;
  if (filling >= 0.0) return static_cast<int>(std::llround(filling * n));
  throw std::invalid_argument("config field np: particle number (or filling) is required");
}

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config field n: must be a positive integer");
  params().validate();
  if (realizations < 1) throw std::invalid_argument("config field realizations: must be >= 1");
  if (workers < 1) throw std::invalid_argument("config field workers: must be >= 1");
  if (quadrature_order < 1)
    throw std::invalid_argument("config field quadrature_order: must be >= 1");
  if (filling >= 0.0 && filling > 1.0)
    throw std::invalid_argument("config field filling: must lie in [0, 1]");
  if (beta && *beta < 0.0) throw std::invalid_argument("config field beta: must be >= 0");
  switch (mode) {
    case ExperimentMode::thermal_compare:
      if (!beta) throw std::invalid_argument("config field beta: required for thermal-compare");
      break;
    case ExperimentMode::eth_correlators: {
      const int p = resolved_np();
      if (p < 1 || 2 * p > n)
        throw std::invalid_argument("config field np: eth-correlators needs 1 <= Np <= N/2");
      break;
    }
    case ExperimentMode::entropy_scan: {
      const int p = resolved_np();
      if (p < 0 || p > n) throw std::invalid_argument("config field np: must lie in [0, N]");
      if (sizes.empty())
        throw std::invalid_argument("config field sizes: entropy-scan needs at least one size");
      for (int m : sizes)
        if (m < 1 || m > n)
          throw std::invalid_argument("config field sizes: entries must lie in [1, N]");
      break;
    }
    default: {
      const int p = resolved_np();
      if (p < 0 || p > n) throw std::invalid_argument("config field np: must lie in [0, N]");
      break;
    }
  }
}

const ReportRecord* EnsembleReport::find(const std::string& name) const {
  for (const ReportRecord& rec : records)
    if (rec.name == name) return &rec;
  return nullptr;
}

namespace {

void check_mode(const ExperimentConfig& cfg, ExperimentMode expected) {
  if (cfg.mode != expected)
    throw std::invalid_argument(std::string("config field mode: expected ") +
                                mode_name(expected));
}

// Deterministic fan-out: realization r must write only its own slot, so any
// worker count yields the same slots and the ordered fold the same report.
template <typename Body>
void for_each_realization(int count, int workers, Body&& body) {
  const int pool_size = std::min(workers, count);
  if (pool_size <= 1) {
    for (int r = 0; r < count; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_lock;
  pool.reserve(pool_size);
  for (int t = 0; t < pool_size; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int r = t; r < count; r += pool_size) body(r);
      } catch (...) {
        std::scoped_lock lock(error_lock);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ReportRecord make_record(std::string name, const StatAccumulator& acc,
                         std::optional<double> predicted, std::string eq,
                         std::string note = "") {
  ReportRecord rec;
  rec.name = std::move(name);
  rec.samples = acc.count();
  rec.measured_mean = acc.mean();
  rec.measured_variance = acc.variance();
  rec.standard_error = acc.std_error();
  rec.predicted = predicted;
  rec.prediction_eq = predicted ? std::move(eq) : "none";
  if (predicted && rec.standard_error > 0.0) {
    rec.z = (rec.measured_mean - *predicted) / rec.standard_error;
    rec.flagged = std::abs(rec.z) > 5.0;
  }
  rec.note = std::move(note);
  return rec;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct CorrelatorSlot {
  bool flagged = false;
  StatAccumulator diag, off;
  double off_sq_mean = 0.0;
  double diag_variance = 0.0;
};

// diagonal/off-diagonal entry statistics of one correlation matrix; the
// off-diagonal second moment and the diagonal spread go in whole-matrix
// scalars so their ensemble spread is measured realization to realization
CorrelatorSlot correlator_stats(const CorrelationMatrix& c) {
  CorrelatorSlot slot;
  StatAccumulator off_sq;
  for (int i = 0; i < c.dim(); ++i) {
    slot.diag.add(c(i, i));
    for (int j = 0; j < i; ++j) {
      slot.off.add(c(i, j));
      off_sq.add(c(i, j) * c(i, j));
    }
  }
  slot.off_sq_mean = off_sq.mean();
  slot.diag_variance = slot.diag.variance();
  return slot;
}

}  // namespace

EnsembleReport run_eth_correlators(const ExperimentConfig& cfg) {
  Stopwatch clock;
  cfg.validate();
  check_mode(cfg, ExperimentMode::eth_correlators);
  const ModelParams params = cfg.params();
  const int n = cfg.n;
  const int np = cfg.resolved_np();
  const double filling = static_cast<double>(np) / n;
  const double beta = effective_beta(params, filling, cfg.quadrature_order);
  const ThermalAverages th = avg_occupation(params, beta, cfg.quadrature_order);

  struct Slot {
    bool flagged = false;
    CorrelatorSlot pure, thermal;
    StatAccumulator occ_sq;
    double diff_diag_rms = 0.0, diff_off_rms = 0.0;
  };
  std::vector<Slot> slots(cfg.realizations);
  for_each_realization(cfg.realizations, cfg.workers, [&](int r) {
    const std::uint64_t child = Rng::mix(cfg.seed, static_cast<std::uint64_t>(r));
    const FreeFermionModel model = build_model(params, Rng::mix(child, 0));
    const EigenstateSpec spec = sample_occupation(n, np, Rng::mix(child, 1));
    const CorrelationMatrix pure = correlation_matrix(model, spec);
    const CorrelationMatrix thermal = thermal_correlation_matrix(model, beta);
    Slot& slot = slots[r];
    slot.flagged = model.spectrum_flagged;
    slot.pure = correlator_stats(pure);
    slot.thermal = correlator_stats(thermal);
    for (int a = 0; a < n; ++a) {
      const double occ = fermi_occupation(model.energies[a], beta);
      slot.occ_sq.add(occ * occ);
    }
    StatAccumulator dd, doff;
    for (int i = 0; i < n; ++i) {
      const double gap = pure(i, i) - thermal(i, i);
      dd.add(gap * gap);
      for (int j = 0; j < i; ++j) {
        const double off_gap = pure(i, j) - thermal(i, j);
        doff.add(off_gap * off_gap);
      }
    }
    slot.diff_diag_rms = std::sqrt(dd.mean());
    slot.diff_off_rms = std::sqrt(doff.mean());
  });

  EnsembleReport report;
  report.config = cfg;
  report.config.beta = beta;
  StatAccumulator pure_diag, pure_off, pure_off_var, pure_diag_var;
  StatAccumulator thermal_diag, thermal_off, thermal_off_var, thermal_diag_var;
  StatAccumulator occ_sq, diff_diag, diff_off;
  for (const Slot& slot : slots) {
    if (slot.flagged) ++report.flagged_realizations;
    if (slot.flagged && !cfg.include_flagged) {
      ++report.excluded_realizations;
      continue;
    }
    pure_diag.merge(slot.pure.diag);
    pure_off.merge(slot.pure.off);
    pure_off_var.add(slot.pure.off_sq_mean);
    pure_diag_var.add(slot.pure.diag_variance);
    thermal_diag.merge(slot.thermal.diag);
    thermal_off.merge(slot.thermal.off);
    thermal_off_var.add(slot.thermal.off_sq_mean);
    thermal_diag_var.add(slot.thermal.diag_variance);
    occ_sq.merge(slot.occ_sq);
    diff_diag.add(slot.diff_diag_rms);
    diff_off.add(slot.diff_off_rms);
  }

  const double nn = static_cast<double>(n);
  report.records.push_back(make_record("pure_diag_mean", pure_diag, filling, "purec"));
  report.records.push_back(make_record("pure_offdiag_mean", pure_off, 0.0, "purec"));
  report.records.push_back(
      make_record("pure_offdiag_variance", pure_off_var, np / (nn * nn), "purec"));
  report.records.push_back(make_record("pure_diag_variance", pure_diag_var, std::nullopt, ""));
  report.records.push_back(make_record("thermal_diag_mean", thermal_diag, th.n_mean, "n"));
  report.records.push_back(make_record("thermal_offdiag_mean", thermal_off, 0.0, "thermalc"));
  report.records.push_back(
      make_record("thermal_offdiag_variance", thermal_off_var, th.n_sq_mean / nn, "thermalc"));
  report.records.push_back(
      make_record("thermal_diag_variance", thermal_diag_var, std::nullopt, ""));
  report.records.push_back(make_record("thermal_mode_occ_sq", occ_sq, th.n_sq_mean, "nn"));
  report.records.push_back(make_record("diff_diag_rms", diff_diag, std::nullopt, ""));
  report.records.push_back(make_record("diff_offdiag_rms", diff_off, std::nullopt, ""));
  report.wall_seconds = clock.seconds();
  return report;
}

EnsembleReport run_entropy_scan(const ExperimentConfig& cfg) {
  Stopwatch clock;
  cfg.validate();
  check_mode(cfg, ExperimentMode::entropy_scan);
  const ModelParams params = cfg.params();
  const int n = cfg.n;
  const int np = cfg.resolved_np();

  struct Slot {
    bool flagged = false;
    std::vector<double> entropies;
  };
  std::vector<Slot> slots(cfg.realizations);
  for_each_realization(cfg.realizations, cfg.workers, [&](int r) {
    const std::uint64_t child = Rng::mix(cfg.seed, static_cast<std::uint64_t>(r));
    const FreeFermionModel model = build_model(params, Rng::mix(child, 0));
    const EigenstateSpec spec = sample_occupation(n, np, Rng::mix(child, 1));
    const CorrelationMatrix c = correlation_matrix(model, spec);
    Rng sub_rng(Rng::mix(child, 2));
    Slot& slot = slots[r];
    slot.flagged = model.spectrum_flagged;
    slot.entropies.reserve(cfg.sizes.size());
    for (int m : cfg.sizes) {
      const int start = static_cast<int>(sub_rng.uniform_below(n - m + 1));
      slot.entropies.push_back(entanglement_entropy(c, Subsystem::contiguous(start, m)));
    }
  });

  EnsembleReport report;
  report.config = cfg;
  std::vector<StatAccumulator> acc(cfg.sizes.size());
  for (const Slot& slot : slots) {
    if (slot.flagged) ++report.flagged_realizations;
    if (slot.flagged && !cfg.include_flagged) {
      ++report.excluded_realizations;
      continue;
    }
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k].add(slot.entropies[k]);
  }

  for (std::size_t k = 0; k < cfg.sizes.size(); ++k) {
    const int m = cfg.sizes[k];
    std::optional<double> predicted;
    std::string eq;
    std::string note;
    if (np == 1 && 2 * m <= n) {
      predicted = predicted_entropy_single(n, m);
      eq = "ent1";
    } else if (np == 1) {
      note = "m > N/2, no prediction";
    } else if (np >= 2 && np <= n - 1 && m <= np) {
      predicted = predicted_entropy_multi(n, np, m);
      eq = "entmany";
      if (m == np) note = "validity boundary m = Np";
    } else if (np >= 2 && m > np) {
      note = "m > Np, no prediction";
    }
    report.records.push_back(make_record("entropy_m" + std::to_string(m), acc[k], predicted,
                                         std::move(eq), std::move(note)));
  }
  report.wall_seconds = clock.seconds();
  return report;
}

EnsembleReport run_thermal_compare(const ExperimentConfig& cfg) {
  Stopwatch clock;
  cfg.validate();
  check_mode(cfg, ExperimentMode::thermal_compare);
  const ModelParams params = cfg.params();
  const int n = cfg.n;
  const double beta = *cfg.beta;
  const ThermalAverages th = avg_occupation(params, beta, cfg.quadrature_order);

  struct Slot {
    bool flagged = false;
    CorrelatorSlot thermal;
    StatAccumulator occ_sq;
  };
  std::vector<Slot> slots(cfg.realizations);
  for_each_realization(cfg.realizations, cfg.workers, [&](int r) {
    const std::uint64_t child = Rng::mix(cfg.seed, static_cast<std::uint64_t>(r));
    const FreeFermionModel model = build_model(params, Rng::mix(child, 0));
    Slot& slot = slots[r];
    slot.flagged = model.spectrum_flagged;
    slot.thermal = correlator_stats(thermal_correlation_matrix(model, beta));
    for (int a = 0; a < n; ++a) {
      const double occ = fermi_occupation(model.energies[a], beta);
      slot.occ_sq.add(occ * occ);
    }
  });

  EnsembleReport report;
  report.config = cfg;
  StatAccumulator diag, off, off_var, diag_var, occ_sq;
  for (const Slot& slot : slots) {
    if (slot.flagged) ++report.flagged_realizations;
    if (slot.flagged && !cfg.include_flagged) {
      ++report.excluded_realizations;
      continue;
    }
    diag.merge(slot.thermal.diag);
    off.merge(slot.thermal.off);
    off_var.add(slot.thermal.off_sq_mean);
    diag_var.add(slot.thermal.diag_variance);
    occ_sq.merge(slot.occ_sq);
  }

  report.records.push_back(make_record("thermal_diag_mean", diag, th.n_mean, "n"));
  report.records.push_back(make_record("thermal_offdiag_mean", off, 0.0, "thermalc"));
  report.records.push_back(
      make_record("thermal_offdiag_variance", off_var, th.n_sq_mean / n, "thermalc"));
  report.records.push_back(make_record("thermal_diag_variance", diag_var, std::nullopt, ""));
  report.records.push_back(make_record("thermal_mode_occ_sq", occ_sq, th.n_sq_mean, "nn"));
  report.wall_seconds = clock.seconds();
  return report;
}

EnsembleReport run_random_fock_compare(const ExperimentConfig& cfg) {
  Stopwatch clock;
  cfg.validate();
  check_mode(cfg, ExperimentMode::random_fock_compare);
  const ModelParams params = cfg.params();
  const int n = cfg.n;
  const int np = cfg.resolved_np();
  const FockSector sector = build_sector(n, np, cfg.sector_cap);
  const std::size_t dim = sector.dim();
  const bool interior = np >= 1 && np <= n - 1;
  const bool with_spectra = interior && dim <= 4096;
  const double etabar = interior ? match_etabar(params, np) : 0.0;

  struct Slot {
    bool flagged = false;
    StatAccumulator haar_diag, haar_off, eig_diag, eig_off, sector_energy, model_diag, model_off;
    double haar_off_sq = 0.0, eig_off_sq = 0.0, model_off_sq = 0.0;
    double sector_energy_var = 0.0;
  };
  std::vector<Slot> slots(cfg.realizations);
  for_each_realization(cfg.realizations, cfg.workers, [&](int r) {
    const std::uint64_t child = Rng::mix(cfg.seed, static_cast<std::uint64_t>(r));
    Slot& slot = slots[r];

    const Eigen::VectorXd psi = sample_haar_vector(dim, Rng::mix(child, 3));
    const CorrelatorSlot haar = correlator_stats(random_state_correlation(sector, psi));
    slot.haar_diag = haar.diag;
    slot.haar_off = haar.off;
    slot.haar_off_sq = haar.off_sq_mean;

    if (with_spectra) {
      const SectorSpectrum spectrum =
          sample_sector_hamiltonian(sector, params.alpha, etabar, Rng::mix(child, 4));
      StatAccumulator energies;
      for (double e : spectrum.eigenvalues) energies.add(e);
      slot.sector_energy = energies;
      slot.sector_energy_var = energies.variance();
      Rng pick(Rng::mix(child, 5));
      const auto k = static_cast<Eigen::Index>(pick.uniform_below(dim));
      const CorrelatorSlot eig =
          correlator_stats(random_state_correlation(sector, spectrum.eigenvectors.col(k)));
      slot.eig_diag = eig.diag;
      slot.eig_off = eig.off;
      slot.eig_off_sq = eig.off_sq_mean;
    }

    if (interior) {
      const FreeFermionModel model = build_model(params, Rng::mix(child, 0));
      const EigenstateSpec spec = sample_occupation(n, np, Rng::mix(child, 1));
      slot.flagged = model.spectrum_flagged;
      const CorrelatorSlot pure = correlator_stats(correlation_matrix(model, spec));
      slot.model_diag = pure.diag;
      slot.model_off = pure.off;
      slot.model_off_sq = pure.off_sq_mean;
    }
  });

  EnsembleReport report;
  report.config = cfg;
  StatAccumulator haar_diag, haar_off, haar_off_var, eig_diag, eig_off_var;
  StatAccumulator sector_energy, sector_energy_var, model_diag, model_off_var;
  for (const Slot& slot : slots) {
    if (slot.flagged) ++report.flagged_realizations;
    if (slot.flagged && !cfg.include_flagged) {
      ++report.excluded_realizations;
      continue;
    }
    haar_diag.merge(slot.haar_diag);
    haar_off.merge(slot.haar_off);
    haar_off_var.add(slot.haar_off_sq);
    if (with_spectra) {
      eig_diag.merge(slot.eig_diag);
      eig_off_var.add(slot.eig_off_sq);
      sector_energy.merge(slot.sector_energy);
      sector_energy_var.add(slot.sector_energy_var);
    }
    if (interior) {
      model_diag.merge(slot.model_diag);
      model_off_var.add(slot.model_off_sq);
    }
  }

  const double dd = static_cast<double>(dim);
  const double ranc_variance = static_cast<double>(binomial(n - 2, np - 1)) / (dd * dd);
  const double fill = static_cast<double>(np) / n;
  report.records.push_back(make_record("haar_diag_mean", haar_diag, fill, "ranC"));
  report.records.push_back(make_record("haar_offdiag_mean", haar_off, 0.0, "ranC"));
  report.records.push_back(
      make_record("haar_offdiag_variance", haar_off_var, ranc_variance, "ranC"));
  if (with_spectra) {
    report.records.push_back(make_record("eig_diag_mean", eig_diag, fill, "ranC"));
    report.records.push_back(
        make_record("eig_offdiag_variance", eig_off_var, ranc_variance, "ranC"));
    report.records.push_back(
        make_record("sector_energy_mean", sector_energy, np * params.alpha, "ranE"));
    report.records.push_back(
        make_record("sector_energy_variance", sector_energy_var, dd * etabar * etabar, "ranE"));
  }
  if (interior) {
    report.records.push_back(make_record("model_diag_mean", model_diag, fill, "purec"));
    report.records.push_back(make_record("model_offdiag_variance", model_off_var,
                                         np / (static_cast<double>(n) * n), "purec"));
  }
  report.wall_seconds = clock.seconds();
  return report;
}

EnsembleReport run_spectrum_stats(const ExperimentConfig& cfg) {
  Stopwatch clock;
  cfg.validate();
  check_mode(cfg, ExperimentMode::spectrum_stats);
  const ModelParams params = cfg.params();
  const int np = cfg.resolved_np();
  const double mean_prediction = np * params.alpha;

  struct Slot {
    bool flagged = false;
    double energy = 0.0;
  };
  std::vector<Slot> slots(cfg.realizations);
  for_each_realization(cfg.realizations, cfg.workers, [&](int r) {
    const std::uint64_t child = Rng::mix(cfg.seed, static_cast<std::uint64_t>(r));
    const FreeFermionModel model = build_model(params, Rng::mix(child, 0));
    const EigenstateSpec spec = sample_occupation(cfg.n, np, Rng::mix(child, 1));
    slots[r] = Slot{model.spectrum_flagged, eigenstate_energy(model, spec)};
  });

  EnsembleReport report;
  report.config = cfg;
  StatAccumulator energy, sq_dev;
  for (const Slot& slot : slots) {
    if (slot.flagged) ++report.flagged_realizations;
    if (slot.flagged && !cfg.include_flagged) {
      ++report.excluded_realizations;
      continue;
    }
    energy.add(slot.energy);
    sq_dev.add((slot.energy - mean_prediction) * (slot.energy - mean_prediction));
  }
  report.records.push_back(make_record("energy_mean", energy, mean_prediction, "E"));
  report.records.push_back(make_record("energy_variance", sq_dev,
                                       np * cfg.n * params.eta * params.eta, "E",
                                       "mean squared deviation from the predicted mean"));
  report.wall_seconds = clock.seconds();
  return report;
}

EnsembleReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case ExperimentMode::eth_correlators: return run_eth_correlators(cfg);
    case ExperimentMode::entropy_scan: return run_entropy_scan(cfg);
    case ExperimentMode::thermal_compare: return run_thermal_compare(cfg);
    case ExperimentMode::random_fock_compare: return run_random_fock_compare(cfg);
    case ExperimentMode::spectrum_stats: return run_spectrum_stats(cfg);
  }
  throw std::invalid_argument("config field mode: unknown experiment mode");
}

}  // namespace ethf
