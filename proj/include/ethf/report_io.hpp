#pragma once

#include <string>

#include "ethf/experiments.hpp"

namespace ethf {

// 17-significant-digit general form (round-trip exact, trailing zeros
// trimmed), locale-independent.
std::string format_double(double x);

// RFC-4180 field quoting; only applied when the field needs it.
std::string csv_escape(const std::string& field);

// One CSV (header + one row) for a single record; LF line endings.
std::string record_csv(const ReportRecord& rec);

// Full report as a JSON object {schema_version, meta, records}.
std::string report_json(const EnsembleReport& report);

// Writes report.json plus <record-name>.csv per record into out_dir
// (created if missing). Returns the list of file names written.
std::vector<std::string> write_report_files(const EnsembleReport& report,
                                            const std::string& out_dir);

// One-screen summary: name, measured, predicted, z per record.
std::string summary_table(const EnsembleReport& report);

}  // namespace ethf
