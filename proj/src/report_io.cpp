#include "ethf/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ethf {

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string record_csv(const ReportRecord& rec) {
  std::string out =
      "name,samples,measured_mean,measured_variance,standard_error,predicted,z,flagged,"
      "prediction_eq,note\n";
  out += csv_escape(rec.name);
  out += ',' + std::to_string(rec.samples);
  out += ',' + format_double(rec.measured_mean);
  out += ',' + format_double(rec.measured_variance);
  out += ',' + format_double(rec.standard_error);
  out += ',';
  if (rec.predicted) out += format_double(*rec.predicted);
  out += ',' + format_double(rec.z);
  out += rec.flagged ? ",true" : ",false";
  out += ',' + csv_escape(rec.prediction_eq);
  out += ',' + csv_escape(rec.note);
  out += '\n';
  return out;
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json meta;
  meta["mode"] = mode_name(cfg.mode);
  meta["n"] = cfg.n;
  meta["np"] = cfg.np;
  meta["filling"] = cfg.filling;
  meta["alpha"] = cfg.alpha;
  meta["eta"] = cfg.eta;
  if (cfg.beta)
    meta["beta"] = *cfg.beta;
  else
    meta["beta"] = nullptr;
  meta["realizations"] = cfg.realizations;
  meta["sizes"] = cfg.sizes;
  meta["seed"] = cfg.seed;
  meta["workers"] = cfg.workers;
  meta["include_flagged"] = cfg.include_flagged;
  meta["quadrature_order"] = cfg.quadrature_order;
  meta["sector_cap"] = cfg.sector_cap;
  return meta;
}

}  // namespace

std::string report_json(const EnsembleReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = report.schema_version;
  nlohmann::ordered_json meta = config_json(report.config);
  meta["excluded_realizations"] = report.excluded_realizations;
  meta["flagged_realizations"] = report.flagged_realizations;
  meta["wall_seconds"] = report.wall_seconds;
  j["meta"] = meta;
  auto records = nlohmann::ordered_json::array();
  for (const ReportRecord& rec : report.records) {
    nlohmann::ordered_json r;
    r["name"] = rec.name;
    r["samples"] = rec.samples;
    r["measured_mean"] = rec.measured_mean;
    r["measured_variance"] = rec.measured_variance;
    r["standard_error"] = rec.standard_error;
    if (rec.predicted)
      r["predicted"] = *rec.predicted;
    else
      r["predicted"] = nullptr;
    r["prediction_eq"] = rec.prediction_eq;
    r["z"] = rec.z;
    r["flagged"] = rec.flagged;
    r["note"] = rec.note;
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

std::vector<std::string> write_report_files(const EnsembleReport& report,
                                            const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  const auto write_file = [&](const std::string& name, const std::string& body) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("write_report_files: cannot open " + name);
    out << body;
    if (!out) throw std::runtime_error("write_report_files: write failed for " + name);
    written.push_back(name);
  };
  write_file("report.json", report_json(report));
  for (const ReportRecord& rec : report.records) write_file(rec.name + ".csv", record_csv(rec));
  return written;
}

std::string summary_table(const EnsembleReport& report) {
  char line[160];
  std::snprintf(line, sizeof(line),
                "mode=%s n=%d realizations=%d seed=%llu excluded=%zu flagged=%zu\n",
                mode_name(report.config.mode), report.config.n, report.config.realizations,
                static_cast<unsigned long long>(report.config.seed),
                report.excluded_realizations, report.flagged_realizations);
  std::string out = line;
  std::snprintf(line, sizeof(line), "%-26s %15s %15s %9s  %s\n", "quantity", "measured",
                "predicted", "z", "eq");
  out += line;
  for (const ReportRecord& rec : report.records) {
    if (rec.predicted)
      std::snprintf(line, sizeof(line), "%-26s %15.8g %15.8g %9.2f  %s%s\n", rec.name.c_str(),
                    rec.measured_mean, *rec.predicted, rec.z, rec.prediction_eq.c_str(),
                    rec.flagged ? " [flagged]" : "");
    else
      std::snprintf(line, sizeof(line), "%-26s %15.8g %15s %9s  %s\n", rec.name.c_str(),
                    rec.measured_mean, "-", "-", "none");
    out += line;
  }
  return out;
}

}  // namespace ethf
