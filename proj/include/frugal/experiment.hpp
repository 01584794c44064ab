#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "frugal/config.hpp"
#include "frugal/dataset.hpp"

namespace frugal {

struct RunRow {
    std::string dataset;
    std::string treatment;
    std::size_t fold = 0;
    std::size_t resample = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::size_t budget = 0;
    std::size_t labels_read = 0;
    std::map<std::string, double> values;
    /// Metric names whose value is 0/0 or the IFA sentinel.
    std::set<std::string> undefined;
    std::optional<tuner::Mode> mode;
    std::optional<double> percentile;
    bool fell_back = false;
    std::string params;
};

struct ExperimentReport {
    std::vector<RunRow> rows;
    std::vector<std::string> treatments;
    std::string config_hash;
    std::string tool_version;
    nlohmann::json config;
    bool percent = false;
};

std::uint64_t run_seed(std::uint64_t master, std::string_view dataset, std::size_t fold,
                       std::size_t resample, std::string_view treatment) noexcept;

/// One treatment on one fold/resample of `plan`. Errors land in the row.
/// `evaluation_labels`, when given, replaces the dataset labels for scoring
/// test rows only; learners still see the dataset labels.
RunRow run_once(const Dataset& data, const std::string& name, const RunConfig& config,
                const PartitionPlan& plan, std::size_t bin, std::size_t resample,
                const std::string& treatment, const Labels* evaluation_labels = nullptr);

/// Bins x resamples runs of every treatment on one in-memory dataset.
std::vector<RunRow> run_dataset(const Dataset& data, const std::string& name,
                                const RunConfig& config, const Labels* evaluation_labels = nullptr);

ExperimentReport run_experiment(const RunConfig& config);

} // namespace frugal
