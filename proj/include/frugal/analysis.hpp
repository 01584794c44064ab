#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "frugal/metrics.hpp"

namespace frugal::analysis {

inline constexpr double kEffectThreshold = 0.35;

/// |mean(a) - mean(b)| over the pooled sample standard deviation. A zero pooled
/// deviation gives 0 for equal means and infinity otherwise.
double cohens_d(std::span<const double> a, std::span<const double> b);

double median(std::vector<double> values);

struct TreatmentSummary {
    std::string treatment;
    double median = 0.0;
    std::size_t samples = 0;
    /// Effect size against the best treatment.
    double d_to_best = 0.0;
    bool best_group = false;
};

struct MetricRanking {
    std::vector<TreatmentSummary> treatments;
    std::string best;
};

/// Treatments whose effect size against the best median does not exceed the
/// threshold share the best group. Treatments with fewer than 2 samples are
/// listed but cannot win.
MetricRanking rank_treatments(const std::map<std::string, std::vector<double>>& samples,
                              metrics::Direction direction, double threshold = kEffectThreshold);

/// dataset -> metric -> treatment -> per-repeat values
using SampleTable =
    std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>>;

struct ComparisonTable {
    std::vector<std::string> datasets;
    std::vector<std::string> metrics;
    std::vector<std::string> treatments;
    /// rankings[dataset][metric]
    std::map<std::string, std::map<std::string, MetricRanking>> rankings;
    /// wins[treatment][metric], summed across datasets
    std::map<std::string, std::map<std::string, std::size_t>> wins;
};

ComparisonTable rank_wins(const SampleTable& table, double threshold = kEffectThreshold);

} // namespace frugal::analysis
