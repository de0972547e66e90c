#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ethf/entanglement.hpp"
#include "ethf/experiments.hpp"
#include "ethf/fock.hpp"
#include "ethf/report_io.hpp"
#include "ethf/rng.hpp"
#include "ethf/thermal.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> mode;
  std::optional<int> n, np, realizations, workers;
  std::optional<double> alpha, eta, beta;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<int>> sizes;
  std::string out_dir = "out";
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != value.size())
    throw std::invalid_argument("config field " + key + ": not a number: " + value);
  return out;
}

long long to_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != value.size())
    throw std::invalid_argument("config field " + key + ": not an integer: " + value);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != value.size() || value.find('-') != std::string::npos)
    throw std::invalid_argument("config field " + key + ": not an unsigned integer: " + value);
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config field " + key + ": not a boolean: " + value);
}

std::vector<int> parse_sizes(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const std::string item = trim(value.substr(pos, comma - pos));
    if (item.empty()) throw std::invalid_argument("config field " + key + ": empty list entry");
    out.push_back(static_cast<int>(to_int(key, item)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("config field " + key + ": empty list");
  return out;
}

ethf::ExperimentMode parse_mode_or_throw(const std::string& name) {
  const auto mode = ethf::parse_mode(name);
  if (!mode)
    throw std::invalid_argument(
        "config field mode: unknown mode '" + name +
        "' (expected eth-correlators, entropy-scan, thermal-compare, random-fock-compare, "
        "or spectrum-stats)");
  return *mode;
}

// flat key=value lines, '#' comments; flags win over file values,
// ETHF_WORKERS fills workers when nothing else does
ethf::ExperimentConfig assemble_config(const Overrides& o, bool& have_seed,
                                       std::string& out_dir) {
  ethf::ExperimentConfig cfg;
  have_seed = false;
  out_dir = o.out_dir;
  bool have_workers = false;

  if (o.config_path) {
    std::ifstream in(*o.config_path);
    if (!in)
      throw std::invalid_argument("config field config: cannot open file " + *o.config_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string text = trim(line);
      if (text.empty() || text[0] == '#') continue;
      const auto eq = text.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config field (line " + std::to_string(line_no) +
                                    "): expected key=value, got: " + text);
      const std::string key = trim(text.substr(0, eq));
      const std::string value = trim(text.substr(eq + 1));
      if (key == "mode")
        cfg.mode = parse_mode_or_throw(value);
      else if (key == "n")
        cfg.n = static_cast<int>(to_int(key, value));
      else if (key == "np")
        cfg.np = static_cast<int>(to_int(key, value));
      else if (key == "filling")
        cfg.filling = to_double(key, value);
      else if (key == "alpha")
        cfg.alpha = to_double(key, value);
      else if (key == "eta")
        cfg.eta = to_double(key, value);
      else if (key == "beta")
        cfg.beta = to_double(key, value);
      else if (key == "realizations")
        cfg.realizations = static_cast<int>(to_int(key, value));
      else if (key == "sizes")
        cfg.sizes = parse_sizes(key, value);
      else if (key == "seed") {
        cfg.seed = to_u64(key, value);
        have_seed = true;
      } else if (key == "workers") {
        cfg.workers = static_cast<int>(to_int(key, value));
        have_workers = true;
      } else if (key == "include_flagged")
        cfg.include_flagged = to_bool(key, value);
      else if (key == "quadrature_order")
        cfg.quadrature_order = static_cast<int>(to_int(key, value));
      else if (key == "sector_cap")
        cfg.sector_cap = to_u64(key, value);
      else if (key == "out")
        out_dir = value;
      else
        throw std::invalid_argument("config field " + key + ": unknown key");
    }
  }

  if (o.mode) cfg.mode = parse_mode_or_throw(*o.mode);
  if (o.n) cfg.n = *o.n;
  if (o.np) cfg.np = *o.np;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.eta) cfg.eta = *o.eta;
  if (o.beta) cfg.beta = *o.beta;
  if (o.realizations) cfg.realizations = *o.realizations;
  if (o.sizes) cfg.sizes = *o.sizes;
  if (o.seed) {
    cfg.seed = *o.seed;
    have_seed = true;
  }
  if (o.workers) {
    cfg.workers = *o.workers;
    have_workers = true;
  }
  if (!have_workers) {
    if (const char* env = std::getenv("ETHF_WORKERS"))
      cfg.workers = static_cast<int>(to_int("ETHF_WORKERS", env));
  }
  return cfg;
}

int cmd_run(const Overrides& o) {
  bool have_seed = false;
  std::string out_dir;
  const ethf::ExperimentConfig cfg = assemble_config(o, have_seed, out_dir);
  if (!have_seed)
    throw std::invalid_argument(
        "config field seed: required (pass --seed or a seed= line; runs must be reproducible)");
  const ethf::EnsembleReport report = ethf::run_experiment(cfg);
  const std::vector<std::string> files = ethf::write_report_files(report, out_dir);
  std::cout << ethf::summary_table(report);
  std::cout << "wrote " << files.size() << " files to " << out_dir << "\n";
  return 0;
}

struct PredictArgs {
  int n = 0;
  double alpha = 0.0, eta = 0.0;
  std::optional<int> np;
  std::optional<double> filling, beta;
  std::vector<int> sizes;
  int order = 256;
};

void print_value(const std::string& name, double value, const std::string& suffix = "") {
  std::cout << name << " = " << ethf::format_double(value) << suffix << "\n";
}

void print_entropy_predictions(int n, int np, const std::vector<int>& sizes) {
  for (int m : sizes) {
    if (np == 1)
      print_value("entropy_m" + std::to_string(m), ethf::predicted_entropy_single(n, m),
                  "  (single-particle)");
    else
      print_value("entropy_m" + std::to_string(m), ethf::predicted_entropy_multi(n, np, m),
                  "  (extensive form)");
  }
}

int cmd_predict(const PredictArgs& a) {
  const ethf::ModelParams params{a.n, a.alpha, a.eta};
  params.validate();
  if (!a.np && !a.filling && !a.beta)
    throw std::invalid_argument("config field np: predict needs --np, --filling, or --beta");
  print_value("band_radius", params.radius());

  if (a.beta) {
    const ethf::ThermalAverages th = ethf::avg_occupation(params, *a.beta, a.order);
    print_value("beta", *a.beta);
    print_value("n_mean_quadrature", th.n_mean);
    print_value("n_sq_mean_quadrature", th.n_sq_mean);
    if (*a.beta > 0.0) {
      const ethf::ThermalAverages low = ethf::avg_occupation_low_t(params, *a.beta);
      print_value("n_mean_closed_form", low.n_mean);
      print_value("n_mean_difference", th.n_mean - low.n_mean);
      print_value("n_sq_mean_closed_form", low.n_sq_mean);
      print_value("n_sq_mean_difference", th.n_sq_mean - low.n_sq_mean);
    }
    print_value("implied_filling", th.n_mean);
    print_value("implied_np", th.n_mean * a.n);
    print_value("energy_mean", th.n_mean * a.n * a.alpha);
    print_value("energy_variance", th.n_mean * a.n * a.n * a.eta * a.eta);
  }

  if (a.np || a.filling) {
    const int np = a.np ? *a.np : static_cast<int>(std::llround(*a.filling * a.n));
    const double filling = a.np ? static_cast<double>(*a.np) / a.n : *a.filling;
    const double beta = ethf::effective_beta(params, filling, a.order);
    const ethf::ThermalAverages th = ethf::avg_occupation(params, beta, a.order);
    print_value("filling", filling);
    print_value("effective_beta", beta);
    print_value("n_mean", th.n_mean);
    print_value("n_sq_mean", th.n_sq_mean);
    print_value("energy_mean", np * a.alpha);
    print_value("energy_variance", static_cast<double>(np) * a.n * a.eta * a.eta);
    if (!a.sizes.empty()) print_entropy_predictions(a.n, np, a.sizes);
  } else if (!a.sizes.empty()) {
    throw std::invalid_argument("config field sizes: entropy predictions need --np or --filling");
  }
  return 0;
}

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

CheckResult check_oracle_equivalence(int max_n) {
  double worst = 0.0;
  for (int n = 4; n <= max_n; n += 2) {
    for (int pair = 0; pair < 2; ++pair) {
      const ethf::ModelParams params{n, 3.0 * std::sqrt(static_cast<double>(n)), 1.0};
      const std::uint64_t child = ethf::Rng::mix(0x9d5fu, static_cast<std::uint64_t>(n * 8 + pair));
      const ethf::FreeFermionModel model = ethf::build_model(params, ethf::Rng::mix(child, 0));
      const ethf::EigenstateSpec spec =
          ethf::sample_occupation(n, n / 2, ethf::Rng::mix(child, 1));
      const ethf::CorrelationMatrix c = ethf::correlation_matrix(model, spec);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        ethf::Subsystem sub;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1u) sub.sites.push_back(i);
        const double delta = std::abs(ethf::entanglement_entropy(c, sub) -
                                      ethf::exact_reduced_entropy(model, spec, sub));
        worst = std::max(worst, delta);
      }
    }
  }
  return {"oracle_equivalence(N<=" + std::to_string(max_n) + ")", worst < 1e-8,
          "max |delta| = " + ethf::format_double(worst)};
}

CheckResult check_thermal_corridor() {
  const ethf::ModelParams params{16, 20.0, 1.0};
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double beta = 0.65 + (4.0 - 0.65) * k / 19.0;
    const ethf::ThermalAverages quad = ethf::avg_occupation(params, beta);
    const ethf::ThermalAverages low = ethf::avg_occupation_low_t(params, beta);
    worst = std::max(worst, std::abs(quad.n_mean - low.n_mean) / low.n_mean);
    worst = std::max(worst, std::abs(quad.n_sq_mean - low.n_sq_mean) / low.n_sq_mean);
  }
  return {"thermal_corridor", worst < 1e-3, "max rel diff = " + ethf::format_double(worst)};
}

CheckResult check_nnz_law(int max_n) {
  for (int n = 2; n <= max_n; ++n) {
    for (int np = 0; np <= n; ++np) {
      const ethf::FockSector sector = ethf::build_sector(n, np);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const std::uint64_t expected = ethf::binomial(n - 2, np - 1);
          const std::size_t got = ethf::sector_number_operator(sector, i, j).nnz();
          if (got != expected)
            return {"nnz_law(N<=" + std::to_string(max_n) + ")", false,
                    "mismatch at N=" + std::to_string(n) + " Np=" + std::to_string(np)};
        }
      }
    }
  }
  return {"nnz_law(N<=" + std::to_string(max_n) + ")", true, "exact for all sectors"};
}

int cmd_validate(const std::string& level) {
  const bool full = level == "full";
  const int oracle_n = full ? 10 : 8;
  const int nnz_n = full ? 10 : 8;
  bool all_pass = true;
  for (const CheckResult& check :
       {check_oracle_equivalence(oracle_n), check_thermal_corridor(), check_nnz_law(nnz_n)}) {
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail
              << "\n";
    all_pass = all_pass && check.pass;
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random free-fermion ensemble toolkit"};
  app.require_subcommand(1);

  Overrides run_args;
  CLI::App* run = app.add_subcommand("run", "run a Monte Carlo experiment and write reports");
  run->add_option("--config", run_args.config_path, "flat key=value config file");
  run->add_option("--mode", run_args.mode,
                  "eth-correlators | entropy-scan | thermal-compare | random-fock-compare | "
                  "spectrum-stats");
  run->add_option("--n", run_args.n, "number of sites");
  run->add_option("--np", run_args.np, "particle number");
  run->add_option("--alpha", run_args.alpha, "level shift");
  run->add_option("--eta", run_args.eta, "coupling scale");
  run->add_option("--beta", run_args.beta, "inverse temperature (thermal-compare)");
  run->add_option("--realizations", run_args.realizations, "ensemble size");
  run->add_option("--sizes", run_args.sizes, "subsystem sizes (comma list)")->delimiter(',');
  run->add_option("--seed", run_args.seed, "master seed (required)");
  run->add_option("--workers", run_args.workers, "worker threads (default ETHF_WORKERS or 1)");
  run->add_option("--out", run_args.out_dir, "output directory (default: out)");

  PredictArgs predict_args;
  CLI::App* predict =
      app.add_subcommand("predict", "print analytic predictions without sampling");
  predict->add_option("--n", predict_args.n, "number of sites")->required();
  predict->add_option("--alpha", predict_args.alpha, "level shift")->required();
  predict->add_option("--eta", predict_args.eta, "coupling scale")->required();
  predict->add_option("--np", predict_args.np, "particle number");
  predict->add_option("--filling", predict_args.filling, "filling fraction Np/N");
  predict->add_option("--beta", predict_args.beta, "inverse temperature");
  predict->add_option("--sizes", predict_args.sizes, "subsystem sizes for entropy predictions")
      ->delimiter(',');
  predict->add_option("--quadrature-order", predict_args.order, "quadrature order (default 256)");

  std::string level = "fast";
  CLI::App* validate = app.add_subcommand("validate", "run the built-in oracle suite");
  validate->add_option("--level", level, "fast | full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (predict->parsed()) return cmd_predict(predict_args);
    if (validate->parsed()) return cmd_validate(level);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
