#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frugal/matrix.hpp"

namespace frugal::metrics {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// A ratio that may be 0/0. Undefined values carry 0 and the flag.
struct Ratio {
    double value = 0.0;
    bool undefined = false;
};

Ratio safe_ratio(double num, double den) noexcept;

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct Classification {
    Ratio recall;
    /// False-alarm rate FP / (FP + TN).
    Ratio far;
    Ratio precision;
    Ratio f1;
    Ratio accuracy;
};

Classification classification_metrics(const ConfusionCounts& c);

/// Mann-Whitney AUC; tied scores count one half. Undefined if one class is absent.
Ratio auc(std::span<const int> y_true, std::span<const double> scores);

/// Initial false alarms: rows ranked by descending score (stable on index),
/// restricted to predicted positives when `y_pred` is given; counts negatives
/// seen before the first true positive. -1 when no true positive is retrieved.
long ifa(std::span<const int> y_true, std::span<const double> scores,
         std::span<const int> y_pred = {});

double labeling_cost(std::size_t labeled, std::size_t total);

struct GroupedCounts {
    ConfusionCounts privileged;
    ConfusionCounts unprivileged;
};

GroupedCounts grouped_confusion(std::span<const int> y_true, std::span<const int> y_pred,
                                std::span<const int> protected_groups);

struct Fairness {
    Ratio aod;
    Ratio eod;
    Ratio spd;
    Ratio di_ratio;
    Ratio di_deviation;
};

/// Group 0 is unprivileged, group 1 privileged. Throws Grouping if either is empty.
Fairness fairness_metrics(std::span<const int> y_true, std::span<const int> y_pred,
                          std::span<const int> protected_groups);

enum class Direction { higher_better, lower_better };

/// Stable metric names used in configs and report headers.
inline constexpr std::string_view kMetricNames[] = {"recall", "far",  "precision", "f1",
                                                    "accuracy", "auc", "ifa",      "cost",
                                                    "aod",    "eod",  "spd",       "di"};

bool is_metric(std::string_view name) noexcept;
Direction direction(std::string_view name);

} // namespace frugal::metrics
