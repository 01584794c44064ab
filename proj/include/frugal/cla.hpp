#pragma once

#include <span>
#include <vector>

#include "frugal/matrix.hpp"

namespace frugal::cla {

/// Percentile with linear interpolation between order statistics
/// (position q * (n - 1) in the sorted sample).
double percentile(std::vector<double> values, double q);

struct Cutoffs {
    double percentile = 0.5;
    std::vector<double> values;
};

/// Per-column percentile C of the feature matrix.
Cutoffs feature_cutoffs(const Matrix& features, double c);

struct PseudoLabeling {
    std::vector<int> counts;
    double median_count = 0.0;
    Labels labels;
};

/// Counts per row how many features strictly exceed their cutoff, then labels
/// rows with an above-median count positive.
PseudoLabeling cla_pseudo_label(const Matrix& features, double c);
PseudoLabeling cla_pseudo_label(const Matrix& features, const Cutoffs& cutoffs);

/// A cell violates the "higher is more prone" tendency when it exceeds the
/// cutoff on a negative row or fails to exceed it on a positive row.
inline bool violates(double value, double cutoff, int label) noexcept {
    return (value > cutoff) != (label == 1);
}

std::vector<std::size_t> violation_scores(const Matrix& features, const Labels& labels,
                                          const Cutoffs& cutoffs);

struct ViolationTable {
    std::vector<std::size_t> scores;
    Indices selected_features;
    Indices kept_instances;
    /// Pseudo-labels of kept_instances, in the same order.
    Labels kept_labels;
    /// Distinct score level used; 0 means the minimum, 1 the next-lowest, ...
    std::size_t fallback_level = 0;
};

/// Feature and instance selection. Throws DegenerateClafi when no distinct
/// score level keeps rows of both pseudo-classes.
ViolationTable clafi_select(const Matrix& features, const Labels& pseudo_labels,
                            const Cutoffs& cutoffs);

} // namespace frugal::cla
