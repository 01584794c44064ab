#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frugal/forest.hpp"
#include "frugal/kernels.hpp"
#include "frugal/label_store.hpp"
#include "frugal/matrix.hpp"

namespace frugal::tuner {

enum class Mode { cla, cla_ml, clafi_ml };

inline constexpr std::array<Mode, 3> kModes = {Mode::cla, Mode::cla_ml, Mode::clafi_ml};

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view name);

/// Percentile grid 0.05, 0.10, ..., 0.95.
std::array<double, 19> percentile_grid() noexcept;

struct LearnerParams {
    forest::ForestParams forest;
    /// Use the 50th percentile for CLAFI violation cutoffs instead of the tuned C.
    bool clafi_fixed_median = false;
};

struct FrugalConfig {
    Mode mode = Mode::cla;
    double percentile = 0.5;
    LearnerParams params;
};

struct FitResult {
    Labels labels;
    std::vector<double> scores;
    /// CLAFI_ML degenerated and CLA_ML was used instead.
    bool fell_back = false;
};

/// Trains the configured learner on unlabeled train rows and labels test rows.
/// CLA mode ignores the train rows and labels the test rows directly.
FitResult fit_predict(const FrugalConfig& config, const Matrix& train, const Matrix& test);

/// Objective value for tuning, higher is better. "balanced" is
/// (recall + 1 - far) / 2; every metric name is accepted and lower-is-better
/// metrics are negated.
double objective_value(std::string_view objective, std::span<const int> y_true,
                       std::span<const int> y_pred, std::span<const double> scores,
                       std::span<const int> protected_groups = {});

bool is_objective(std::string_view objective) noexcept;

struct GridRow {
    Mode mode = Mode::cla;
    double percentile = 0.0;
    double score = 0.0;
    bool fell_back = false;
    bool failed = false;
    std::string error;
};

struct TuneResult {
    FrugalConfig best;
    double best_score = 0.0;
    std::vector<GridRow> table;
    std::string objective;
};

struct TuneOptions {
    std::string objective = "balanced";
    LearnerParams params;
    /// Protected group per validation row, required only for fairness objectives.
    std::optional<Labels> validation_protected;
    kernels::Execution exec = kernels::Execution::parallel;
};

/// Grid search over 3 modes x 19 percentiles. `validation` indexes rows of
/// `train`; their labels are read from `labels` and nothing else is.
/// Ties go to the smaller percentile, then CLA < CLA_ML < CLAFI_ML.
TuneResult tune(const Matrix& train, const Indices& validation, LabelStore& labels,
                const TuneOptions& options = {});

} // namespace frugal::tuner
