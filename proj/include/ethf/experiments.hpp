#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ethf/model.hpp"

namespace ethf {

// Streaming mean/variance (Welford) with Chan's parallel merge rule.
class StatAccumulator {
 public:
  void add(double x);
  void merge(const StatAccumulator& other);

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  // sample variance (n-1 denominator); 0 for count < 2
  double variance() const;
  // standard error of the mean
  double std_error() const;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

StatAccumulator merge_accumulators(const StatAccumulator& a, const StatAccumulator& b);

enum class ExperimentMode {
  eth_correlators,
  entropy_scan,
  thermal_compare,
  random_fock_compare,
  spectrum_stats,
};

const char* mode_name(ExperimentMode mode);
std::optional<ExperimentMode> parse_mode(const std::string& name);

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::eth_correlators;
  int n = 0;
  int np = -1;           // resolved from filling when < 0
  double filling = -1.0; // optional alternative to np
  double alpha = 0.0;
  double eta = 0.0;
  std::optional<double> beta;  // thermal-compare only
  int realizations = 1;
  std::vector<int> sizes;  // entropy-scan subsystem sizes
  std::uint64_t seed = 0;
  int workers = 1;
  bool include_flagged = false;  // keep realizations with non-positive energies
  int quadrature_order = 256;
  std::uint64_t sector_cap = 1000000;

  ModelParams params() const { return ModelParams{n, alpha, eta}; }
  int resolved_np() const;
  // throws std::invalid_argument with a field-naming message
  void validate() const;
};

// One measured quantity with its analytic prediction (if any) attached.
struct ReportRecord {
  std::string name;
  std::size_t samples = 0;
  double measured_mean = 0.0;
  double measured_variance = 0.0;
  double standard_error = 0.0;
  std::optional<double> predicted;
  std::string prediction_eq = "none";  // one of E, purec, thermalc, n, nn, ent1, entmany, ranE, ranC
  double z = 0.0;
  bool flagged = false;  // |z| > 5
  std::string note;
};

struct EnsembleReport {
  std::string schema_version = "1";
  ExperimentConfig config;
  std::size_t excluded_realizations = 0;
  std::size_t flagged_realizations = 0;  // non-positive spectrum count (excluded or not)
  double wall_seconds = 0.0;
  std::vector<ReportRecord> records;

  const ReportRecord* find(const std::string& name) const;
};

EnsembleReport run_eth_correlators(const ExperimentConfig& cfg);
EnsembleReport run_entropy_scan(const ExperimentConfig& cfg);
EnsembleReport run_thermal_compare(const ExperimentConfig& cfg);
EnsembleReport run_random_fock_compare(const ExperimentConfig& cfg);
EnsembleReport run_spectrum_stats(const ExperimentConfig& cfg);

// Dispatch on cfg.mode.
EnsembleReport run_experiment(const ExperimentConfig& cfg);

}  // namespace ethf
