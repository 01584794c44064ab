#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "frugal/baselines.hpp"
#include "frugal/dataset.hpp"
#include "frugal/tuner.hpp"

namespace frugal {

struct DatasetSpec {
    std::string name;
    std::filesystem::path path;
    Schema schema;
};

struct TreatmentParams {
    tuner::LearnerParams frugal;
    baselines::SelfTrainParams self_train;
    baselines::CoTrainParams co_train;
    baselines::GraphParams label_prop;
    baselines::GraphParams label_spread;
    forest::ForestParams supervised_forest;
};

inline constexpr std::string_view kTreatments[] = {"frugal",     "self_train",   "co_train",
                                                   "label_prop", "label_spread", "supervised_forest"};

bool is_treatment(std::string_view name) noexcept;

struct RunConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<std::string> treatments;
    double label_fraction = 0.025;
    std::size_t bins = 5;
    std::size_t resamples = 5;
    std::string objective = "balanced";
    TreatmentParams params;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "frugal-out";
    std::vector<std::string> formats = {"csv", "markdown"};
    /// Markdown display of ratio metrics multiplied by 100.
    bool percent = false;
};

/// Throws Config on unknown keys, bad types or violated invariants. Relative
/// dataset paths resolve against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& file);

/// Every key with its resolved value; keys sorted.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const forest::ForestParams& p);
nlohmann::json treatment_params_json(const RunConfig& config, std::string_view treatment);

/// FNV-1a over the canonical JSON text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

void validate(const RunConfig& config);

} // namespace frugal
