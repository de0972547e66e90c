#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "ethf/report_io.hpp"
#include "json.hpp"

using namespace ethf;

namespace {

ReportRecord sample_record() {
  ReportRecord rec;
  rec.name = "pure_offdiag_variance";
  rec.samples = 42;
  rec.measured_mean = 0.0111234567890123;
  rec.measured_variance = 2.5e-7;
  rec.standard_error = 7.7e-5;
  rec.predicted = 0.015625;
  rec.prediction_eq = "purec";
  rec.z = -57.25;
  rec.flagged = true;
  rec.note = "off-diagonal second moment";
  return rec;
}

EnsembleReport tiny_report() {
  ExperimentConfig cfg;
  cfg.mode = ExperimentMode::spectrum_stats;
  cfg.n = 12;
  cfg.np = 3;
  cfg.alpha = 11.0;
  cfg.eta = 1.0;
  cfg.realizations = 25;
  cfg.seed = 5551212;
  return run_experiment(cfg);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("report_io") {

TEST_CASE("doubles format round-trip exactly and locale-independently") {
  for (double x : {0.0, 1.0, -1.5, 1.0 / 3.0, 0.1, 1e300, -2.5e-8, 3.141592653589793,
                   0.0111234567890123}) {
    std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-1.5) == "-1.5");
}

TEST_CASE("csv escaping quotes only when needed") {
  CHECK(csv_escape("plain_name") == "plain_name");
  CHECK(csv_escape("has,comma") == "\"has,comma\"");
  CHECK(csv_escape("says \"hi\"") == "\"says \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  CHECK(csv_escape("") == "");
}

TEST_CASE("record csv layout is byte-stable") {
  ReportRecord rec = sample_record();
  std::string csv = record_csv(rec);
  CHECK(csv == record_csv(rec));
  CHECK(csv.substr(0, csv.find('\n')) ==
        "name,samples,measured_mean,measured_variance,standard_error,predicted,z,flagged,"
        "prediction_eq,note");
  CHECK(csv.find("\r") == std::string::npos);
  CHECK(csv.back() == '\n');
  CHECK(csv.find(",true,") != std::string::npos);
  CHECK(csv.find("purec") != std::string::npos);

  rec.predicted.reset();
  rec.prediction_eq = "none";
  rec.flagged = false;
  std::string bare = record_csv(rec);
  // empty predicted field between standard_error and z
  CHECK(bare.find("7.7000000000000001e-05,,") != std::string::npos);
  CHECK(bare.find(",false,") != std::string::npos);

  rec.note = "needs, quoting";
  CHECK(record_csv(rec).find("\"needs, quoting\"") != std::string::npos);
}

TEST_CASE("json report carries the full config and bit-exact record values") {
  EnsembleReport rep = tiny_report();
  nlohmann::json j = nlohmann::json::parse(report_json(rep));
  CHECK(j["schema_version"] == "1");
  CHECK(j["meta"]["mode"] == "spectrum-stats");
  CHECK(j["meta"]["n"] == 12);
  CHECK(j["meta"]["seed"] == 5551212);
  CHECK(j["meta"]["beta"].is_null());
  CHECK(j["meta"]["realizations"] == 25);
  REQUIRE(j["records"].is_array());
  REQUIRE(j["records"].size() == rep.records.size());
  for (std::size_t k = 0; k < rep.records.size(); ++k) {
    const auto& rj = j["records"][k];
    const ReportRecord& rr = rep.records[k];
    CHECK(rj["name"] == rr.name);
    CHECK(rj["measured_mean"].get<double>() == rr.measured_mean);
    CHECK(rj["standard_error"].get<double>() == rr.standard_error);
    if (rr.predicted)
      CHECK(rj["predicted"].get<double>() == *rr.predicted);
    else
      CHECK(rj["predicted"].is_null());
    CHECK(rj["z"].get<double>() == rr.z);
  }
}

TEST_CASE("report files land on disk and rerun byte-identically") {
  namespace fs = std::filesystem;
  EnsembleReport rep = tiny_report();
  fs::path dir1 = fs::temp_directory_path() / "ethf_report_io_test_a";
  fs::path dir2 = fs::temp_directory_path() / "ethf_report_io_test_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  std::vector<std::string> files = write_report_files(rep, dir1.string());
  REQUIRE(files.size() == rep.records.size() + 1);
  CHECK(files[0] == "report.json");
  for (const std::string& f : files) CHECK(fs::exists(dir1 / f));

  EnsembleReport again = tiny_report();
  write_report_files(again, dir2.string());
  for (const std::string& f : files) {
    if (f == "report.json") continue;  // wall_seconds differs
    CHECK(slurp(dir1 / f) == slurp(dir2 / f));
  }
  nlohmann::json ja = nlohmann::json::parse(slurp(dir1 / "report.json"));
  nlohmann::json jb = nlohmann::json::parse(slurp(dir2 / "report.json"));
  ja["meta"].erase("wall_seconds");
  jb["meta"].erase("wall_seconds");
  CHECK(ja == jb);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("summary table shows every record and marks missing predictions") {
  ExperimentConfig cfg;
  cfg.mode = ExperimentMode::eth_correlators;
  cfg.n = 12;
  cfg.np = 3;
  cfg.alpha = 11.0;
  cfg.eta = 1.0;
  cfg.realizations = 10;
  cfg.seed = 99;
  EnsembleReport rep = run_experiment(cfg);
  std::string table = summary_table(rep);
  for (const ReportRecord& rec : rep.records) CHECK(table.find(rec.name) != std::string::npos);
  CHECK(table.find("mode=eth-correlators") != std::string::npos);
  CHECK(table.find(" - ") != std::string::npos);   // no-prediction rows
  CHECK(table.find("seed=99") != std::string::npos);
}

}  // TEST_SUITE
