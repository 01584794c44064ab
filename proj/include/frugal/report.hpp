#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "frugal/analysis.hpp"
#include "frugal/experiment.hpp"

namespace frugal {

/// Fixed column order of the per-run CSV.
std::vector<std::string> csv_columns();

std::string runs_csv(const ExperimentReport& report);
std::vector<RunRow> parse_runs_csv(std::string_view text, std::string* config_hash = nullptr);
std::vector<RunRow> read_runs_csv(const std::filesystem::path& file,
                                  std::string* config_hash = nullptr);

/// Per-repeat metric samples. Failed runs and undefined values are skipped;
/// AOD, EOD and SPD enter as magnitudes and DI as its deviation from 1.
analysis::SampleTable sample_table(const std::vector<RunRow>& rows);

/// Metric names in report order.
std::vector<std::string> report_metrics(const std::vector<RunRow>& rows);

std::string markdown_report(const ExperimentReport& report);

/// Writes runs.csv and/or report.md under `dir`; returns the written paths.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats);

} // namespace frugal
