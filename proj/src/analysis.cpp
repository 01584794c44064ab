#include "frugal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "frugal/cla.hpp"
#include "frugal/error.hpp"

namespace frugal::analysis {

namespace {

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sum_sq_dev(std::span<const double> v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s;
}

} // namespace

double cohens_d(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw Error(ErrorKind::SampleTooSmall, "cohens_d needs at least 2 values per sample");
    const double ma = mean(a);
    const double mb = mean(b);
    const double pooled_var = (sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) /
                              static_cast<double>(a.size() + b.size() - 2);
    const double diff = std::abs(ma - mb);
    if (pooled_var == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / std::sqrt(pooled_var);
}

double median(std::vector<double> values) { return cla::percentile(std::move(values), 0.5); }

MetricRanking rank_treatments(const std::map<std::string, std::vector<double>>& samples,
                              metrics::Direction direction, double threshold) {
    MetricRanking out;
    const std::vector<double>* best = nullptr;
    double best_median = 0.0;
    for (const auto& [name, values] : samples) {
        TreatmentSummary s;
        s.treatment = name;
        s.samples = values.size();
        if (!values.empty()) s.median = median(values);
        out.treatments.push_back(s);
        if (values.size() < 2) continue;
        const bool better = direction == metrics::Direction::higher_better ? s.median > best_median
                                                                            : s.median < best_median;
        if (best == nullptr || better) {
            best = &values;
            best_median = s.median;
            out.best = name;
        }
    }
    if (best == nullptr) return out;
    for (auto& s : out.treatments) {
        const auto& values = samples.at(s.treatment);
        if (values.size() < 2) {
            s.d_to_best = std::numeric_limits<double>::infinity();
            continue;
        }
        s.d_to_best = cohens_d(*best, values);
        // Only differences larger than the threshold separate a treatment from the best.
        s.best_group = s.d_to_best <= threshold;
    }
    return out;
}

ComparisonTable rank_wins(const SampleTable& table, double threshold) {
    ComparisonTable out;
    std::set<std::string> metric_set, treatment_set;
    for (const auto& [dataset, by_metric] : table) {
        out.datasets.push_back(dataset);
        for (const auto& [metric, by_treatment] : by_metric) {
            metric_set.insert(metric);
            for (const auto& [treatment, values] : by_treatment) treatment_set.insert(treatment);
        }
    }
    for (auto name : metrics::kMetricNames)
        if (metric_set.contains(std::string(name))) out.metrics.emplace_back(name);
    for (const auto& m : metric_set)
        if (std::find(out.metrics.begin(), out.metrics.end(), m) == out.metrics.end())
            out.metrics.push_back(m);
    out.treatments.assign(treatment_set.begin(), treatment_set.end());

    for (const auto& t : out.treatments)
        for (const auto& m : out.metrics) out.wins[t][m] = 0;

    for (const auto& [dataset, by_metric] : table) {
        for (const auto& [metric, by_treatment] : by_metric) {
            auto ranking = rank_treatments(by_treatment, metrics::direction(metric), threshold);
            for (const auto& s : ranking.treatments)
                if (s.best_group) ++out.wins[s.treatment][metric];
            out.rankings[dataset][metric] = std::move(ranking);
        }
    }
    return out;
}

} // namespace frugal::analysis
