#include "frugal/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "frugal/error.hpp"

namespace frugal::metrics {

Ratio safe_ratio(double num, double den) noexcept {
    if (den == 0.0) return {0.0, true};
    return {num / den, false};
}

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size())
        throw Error(ErrorKind::InvalidInput, "confusion: length mismatch");
    if (y_true.empty()) throw Error(ErrorKind::InvalidInput, "confusion: empty input");
    ConfusionCounts c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool t = y_true[i] == 1;
        const bool p = y_pred[i] == 1;
        if (t && p) ++c.tp;
        else if (t) ++c.fn;
        else if (p) ++c.fp;
        else ++c.tn;
    }
    return c;
}

Classification classification_metrics(const ConfusionCounts& c) {
    const auto d = [](std::size_t v) { return static_cast<double>(v); };
    Classification m;
    m.recall = safe_ratio(d(c.tp), d(c.tp + c.fn));
    m.far = safe_ratio(d(c.fp), d(c.fp + c.tn));
    m.precision = safe_ratio(d(c.tp), d(c.tp + c.fp));
    if (m.recall.undefined || m.precision.undefined) {
        m.f1 = {0.0, true};
    } else {
        m.f1 = safe_ratio(2.0 * m.precision.value * m.recall.value,
                          m.precision.value + m.recall.value);
    }
    m.accuracy = safe_ratio(d(c.tp + c.tn), d(c.total()));
    return m;
}

Ratio auc(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) throw Error(ErrorKind::InvalidInput, "auc: length mismatch");
    const std::size_t n = y_true.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double pos_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        // Average 1-based rank of the tie block.
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (y_true[order[k]] == 1) {
                pos_rank_sum += rank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) return {0.0, true};
    const double np = static_cast<double>(positives);
    const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
    return {u / (np * static_cast<double>(negatives)), false};
}

long ifa(std::span<const int> y_true, std::span<const double> scores, std::span<const int> y_pred) {
    if (y_true.size() != scores.size() || (!y_pred.empty() && y_pred.size() != y_true.size()))
        throw Error(ErrorKind::InvalidInput, "ifa: length mismatch");
    std::vector<std::size_t> order(y_true.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    long false_alarms = 0;
    for (auto i : order) {
        if (!y_pred.empty() && y_pred[i] != 1) continue;
        if (y_true[i] == 1) return false_alarms;
        ++false_alarms;
    }
    return -1;
}

double labeling_cost(std::size_t labeled, std::size_t total) {
    if (total == 0 || labeled > total)
        throw Error(ErrorKind::InvalidInput, "labeling_cost: need 0 <= labeled <= total, total > 0");
    return static_cast<double>(labeled) / static_cast<double>(total);
}

GroupedCounts grouped_confusion(std::span<const int> y_true, std::span<const int> y_pred,
                                std::span<const int> protected_groups) {
    if (y_true.size() != y_pred.size() || y_true.size() != protected_groups.size())
        throw Error(ErrorKind::InvalidInput, "fairness: length mismatch");
    std::array<std::vector<int>, 2> t, p;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int g = protected_groups[i] == 1 ? 1 : 0;
        t[g].push_back(y_true[i]);
        p[g].push_back(y_pred[i]);
    }
    if (t[0].empty() || t[1].empty())
        throw Error(ErrorKind::Grouping, "fairness metrics need both privileged and unprivileged rows");
    return {confusion(t[1], p[1]), confusion(t[0], p[0])};
}

namespace {

Ratio difference(Ratio a, Ratio b) { return {a.value - b.value, a.undefined || b.undefined}; }

struct Rates {
    Ratio tpr, fpr, positive_rate;
};

Rates rates(const ConfusionCounts& c) {
    const auto d = [](std::size_t v) { return static_cast<double>(v); };
    return {safe_ratio(d(c.tp), d(c.tp + c.fn)), safe_ratio(d(c.fp), d(c.fp + c.tn)),
            safe_ratio(d(c.tp + c.fp), d(c.total()))};
}

} // namespace

Fairness fairness_metrics(std::span<const int> y_true, std::span<const int> y_pred,
                          std::span<const int> protected_groups) {
    const auto g = grouped_confusion(y_true, y_pred, protected_groups);
    const Rates u = rates(g.unprivileged);
    const Rates p = rates(g.privileged);
    Fairness f;
    const Ratio fpr_gap = difference(u.fpr, p.fpr);
    const Ratio tpr_gap = difference(u.tpr, p.tpr);
    f.aod = {(fpr_gap.value + tpr_gap.value) * 0.5, fpr_gap.undefined || tpr_gap.undefined};
    f.eod = tpr_gap;
    f.spd = difference(u.positive_rate, p.positive_rate);
    f.di_ratio = safe_ratio(u.positive_rate.value, p.positive_rate.value);
    f.di_deviation = {f.di_ratio.undefined ? 0.0 : std::abs(1.0 - f.di_ratio.value),
                      f.di_ratio.undefined};
    return f;
}

bool is_metric(std::string_view name) noexcept {
    return std::find(std::begin(kMetricNames), std::end(kMetricNames), name) !=
           std::end(kMetricNames);
}

Direction direction(std::string_view name) {
    if (name == "recall" || name == "precision" || name == "f1" || name == "accuracy" ||
        name == "auc")
        return Direction::higher_better;
    if (is_metric(name) || name == "di_deviation") return Direction::lower_better;
    throw Error(ErrorKind::UnknownObjective, "unknown metric: " + std::string(name));
}

} // namespace frugal::metrics
