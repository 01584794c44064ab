#include "frugal/tuner.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "frugal/cla.hpp"
#include "frugal/error.hpp"
#include "frugal/metrics.hpp"

namespace frugal::tuner {

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
    case Mode::cla: return "CLA";
    case Mode::cla_ml: return "CLA_ML";
    case Mode::clafi_ml: return "CLAFI_ML";
    }
    return "?";
}

Mode parse_mode(std::string_view name) {
    for (auto m : kModes)
        if (to_string(m) == name) return m;
    throw Error(ErrorKind::InvalidInput, "unknown mode: " + std::string(name));
}

std::array<double, 19> percentile_grid() noexcept {
    std::array<double, 19> grid{};
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = static_cast<double>(5 * (k + 1)) / 100.0;
    return grid;
}

namespace {

FitResult forest_fit(const Matrix& train, const Labels& pseudo, const Matrix& test,
                     const forest::ForestParams& params) {
    auto model = forest::train_forest(train, pseudo, params);
    auto pred = model.predict(test);
    return {std::move(pred.labels), std::move(pred.scores), false};
}

} // namespace

FitResult fit_predict(const FrugalConfig& config, const Matrix& train, const Matrix& test) {
    if (train.cols() != test.cols())
        throw Error(ErrorKind::ColumnMismatch, "train and test column counts differ");
    const double c = config.percentile;
    switch (config.mode) {
    case Mode::cla: {
        auto pl = cla::cla_pseudo_label(test, c);
        FitResult out;
        out.labels = std::move(pl.labels);
        out.scores.reserve(pl.counts.size());
        const double f = static_cast<double>(test.cols());
        for (int k : pl.counts) out.scores.push_back(static_cast<double>(k) / f);
        return out;
    }
    case Mode::cla_ml: {
        auto pl = cla::cla_pseudo_label(train, c);
        return forest_fit(train, pl.labels, test, config.params.forest);
    }
    case Mode::clafi_ml: {
        const auto cutoffs = cla::feature_cutoffs(train, c);
        auto pl = cla::cla_pseudo_label(train, cutoffs);
        const auto violation_cutoffs =
            config.params.clafi_fixed_median ? cla::feature_cutoffs(train, 0.5) : cutoffs;
        std::optional<cla::ViolationTable> table;
        try {
            table = cla::clafi_select(train, pl.labels, violation_cutoffs);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateClafi) throw;
        }
        if (!table) {
            auto out = forest_fit(train, pl.labels, test, config.params.forest);
            out.fell_back = true;
            return out;
        }
        const Matrix kept = train.select_rows(table->kept_instances).select_cols(table->selected_features);
        return forest_fit(kept, table->kept_labels, test.select_cols(table->selected_features),
                          config.params.forest);
    }
    }
    throw Error(ErrorKind::InvalidInput, "unhandled mode");
}

bool is_objective(std::string_view objective) noexcept {
    return objective == "balanced" || metrics::is_metric(objective);
}

double objective_value(std::string_view objective, std::span<const int> y_true,
                       std::span<const int> y_pred, std::span<const double> scores,
                       std::span<const int> protected_groups) {
    if (!is_objective(objective))
        throw Error(ErrorKind::UnknownObjective, "unknown objective: " + std::string(objective));
    const auto cls = metrics::classification_metrics(metrics::confusion(y_true, y_pred));
    if (objective == "balanced") return (cls.recall.value + 1.0 - cls.far.value) / 2.0;
    if (objective == "recall") return cls.recall.value;
    if (objective == "far") return -cls.far.value;
    if (objective == "precision") return cls.precision.value;
    if (objective == "f1") return cls.f1.value;
    if (objective == "accuracy") return cls.accuracy.value;
    if (objective == "auc") return metrics::auc(y_true, scores).value;
    if (objective == "ifa") {
        const long v = metrics::ifa(y_true, scores, y_pred);
        return v < 0 ? -std::numeric_limits<double>::infinity() : -static_cast<double>(v);
    }
    // Every config reads the same labels, so cost cannot separate them.
    if (objective == "cost") return 0.0;
    if (protected_groups.empty())
        throw Error(ErrorKind::InvalidInput,
                    "fairness objective '" + std::string(objective) + "' needs protected groups");
    const auto fair = metrics::fairness_metrics(y_true, y_pred, protected_groups);
    if (objective == "aod") return -std::abs(fair.aod.value);
    if (objective == "eod") return -std::abs(fair.eod.value);
    if (objective == "spd") return -std::abs(fair.spd.value);
    return -fair.di_deviation.value;
}

TuneResult tune(const Matrix& train, const Indices& validation, LabelStore& labels,
                const TuneOptions& options) {
    if (!is_objective(options.objective))
        throw Error(ErrorKind::UnknownObjective, "unknown objective: " + options.objective);
    if (validation.empty()) throw Error(ErrorKind::InvalidInput, "validation slice is empty");
    for (auto i : validation)
        if (i >= train.rows()) throw Error(ErrorKind::InvalidInput, "validation index out of range");
    if (options.validation_protected && options.validation_protected->size() != validation.size())
        throw Error(ErrorKind::InvalidInput, "validation protected groups length mismatch");

    const Labels truth = labels.read(validation);
    const Matrix held = train.select_rows(validation);
    const Labels no_groups;
    const Labels& groups = options.validation_protected ? *options.validation_protected : no_groups;

    const auto grid = percentile_grid();
    std::vector<GridRow> table(grid.size() * kModes.size());
    const auto cells = static_cast<std::ptrdiff_t>(table.size());
#pragma omp parallel for schedule(dynamic) if (options.exec == kernels::Execution::parallel)
    for (std::ptrdiff_t cell = 0; cell < cells; ++cell) {
        const auto k = static_cast<std::size_t>(cell);
        GridRow& row = table[k];
        row.percentile = grid[k / kModes.size()];
        row.mode = kModes[k % kModes.size()];
        try {
            FrugalConfig config{row.mode, row.percentile, options.params};
            auto fit = fit_predict(config, train, held);
            row.fell_back = fit.fell_back;
            row.score = objective_value(options.objective, truth, fit.labels, fit.scores, groups);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    }

    TuneResult result;
    result.objective = options.objective;
    const GridRow* best = nullptr;
    // Rows are ordered by (percentile, mode), so the first maximum wins ties.
    for (const auto& row : table) {
        if (row.failed) continue;
        if (best == nullptr || row.score > best->score) best = &row;
    }
    if (best == nullptr) throw Error(ErrorKind::TuningFailed, "every grid configuration failed");
    result.best = FrugalConfig{best->mode, best->percentile, options.params};
    result.best_score = best->score;
    result.table = std::move(table);
    return result;
}

} // namespace frugal::tuner
