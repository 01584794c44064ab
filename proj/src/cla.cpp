#include "frugal/cla.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "frugal/error.hpp"

namespace frugal::cla {

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(ErrorKind::InvalidInput, "percentile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || lo == hi) return values[lo];
    return values[lo] + frac * (values[hi] - values[lo]);
}

Cutoffs feature_cutoffs(const Matrix& features, double c) {
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::InvalidInput, "percentile must lie in (0, 1)");
    if (features.empty()) throw Error(ErrorKind::InvalidInput, "empty feature matrix");
    require_finite(features, "feature_cutoffs");
    Cutoffs out;
    out.percentile = c;
    out.values.reserve(features.cols());
    for (std::size_t j = 0; j < features.cols(); ++j)
        out.values.push_back(percentile(features.column(j), c));
    return out;
}

PseudoLabeling cla_pseudo_label(const Matrix& features, const Cutoffs& cutoffs) {
    if (cutoffs.values.size() != features.cols())
        throw Error(ErrorKind::ColumnMismatch, "cutoff count does not match feature columns");
    if (features.rows() == 0) throw Error(ErrorKind::InvalidInput, "empty feature matrix");
    PseudoLabeling out;
    out.counts.resize(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto row = features.row(i);
        int k = 0;
        for (std::size_t j = 0; j < row.size(); ++j) k += row[j] > cutoffs.values[j] ? 1 : 0;
        out.counts[i] = k;
    }
    out.median_count = percentile(std::vector<double>(out.counts.begin(), out.counts.end()), 0.5);
    out.labels.resize(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i)
        out.labels[i] = static_cast<double>(out.counts[i]) > out.median_count ? 1 : 0;
    return out;
}

PseudoLabeling cla_pseudo_label(const Matrix& features, double c) {
    return cla_pseudo_label(features, feature_cutoffs(features, c));
}

std::vector<std::size_t> violation_scores(const Matrix& features, const Labels& labels,
                                          const Cutoffs& cutoffs) {
    if (labels.size() != features.rows())
        throw Error(ErrorKind::InvalidInput, "label count does not match rows");
    if (cutoffs.values.size() != features.cols())
        throw Error(ErrorKind::ColumnMismatch, "cutoff count does not match feature columns");
    std::vector<std::size_t> scores(features.cols(), 0);
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto row = features.row(i);
        for (std::size_t j = 0; j < row.size(); ++j)
            scores[j] += violates(row[j], cutoffs.values[j], labels[i]) ? 1 : 0;
    }
    return scores;
}

ViolationTable clafi_select(const Matrix& features, const Labels& pseudo_labels,
                            const Cutoffs& cutoffs) {
    ViolationTable table;
    table.scores = violation_scores(features, pseudo_labels, cutoffs);
    const std::set<std::size_t> levels(table.scores.begin(), table.scores.end());

    std::size_t level_index = 0;
    for (auto level : levels) {
        Indices selected;
        for (std::size_t j = 0; j < table.scores.size(); ++j)
            if (table.scores[j] == level) selected.push_back(j);

        Indices kept;
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < features.rows(); ++i) {
            bool clean = true;
            for (auto j : selected) {
                if (violates(features(i, j), cutoffs.values[j], pseudo_labels[i])) {
                    clean = false;
                    break;
                }
            }
            if (!clean) continue;
            kept.push_back(i);
            (pseudo_labels[i] == 1 ? has_pos : has_neg) = true;
        }
        if (has_pos && has_neg) {
            table.selected_features = std::move(selected);
            table.kept_instances = std::move(kept);
            table.kept_labels.reserve(table.kept_instances.size());
            for (auto i : table.kept_instances) table.kept_labels.push_back(pseudo_labels[i]);
            table.fallback_level = level_index;
            return table;
        }
        ++level_index;
    }
    throw Error(ErrorKind::DegenerateClafi,
                "no violation-score level keeps instances of both pseudo-classes");
}

} // namespace frugal::cla
