#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "frugal/forest.hpp"
#include "frugal/matrix.hpp"

namespace frugal::baselines {

struct SelfTrainParams {
    double probability_threshold = 0.7;
    std::size_t max_iter = 10;
    forest::ForestParams forest;
};

struct SelfTrainResult {
    forest::TrainedForest model;
    /// Unlabeled row indices adopted into the pool, with their pseudo-labels.
    Indices adopted;
    Labels adopted_labels;
    /// Pool size after each iteration, starting with the labeled count.
    std::vector<std::size_t> pool_sizes;
    std::size_t iterations = 0;
};

SelfTrainResult self_train(const Matrix& labeled, const Labels& labels, const Matrix& unlabeled,
                           const SelfTrainParams& params);

struct CoTrainParams {
    /// Two disjoint feature index sets covering every feature; empty means even/odd split.
    std::optional<std::pair<Indices, Indices>> split;
    std::size_t k_per_iter = 10;
    std::size_t max_iter = 20;
    forest::ForestParams forest;
};

std::pair<Indices, Indices> even_odd_split(std::size_t feature_count);

class CoTrainModel {
public:
    CoTrainModel(forest::TrainedForest first, forest::TrainedForest second,
                 std::pair<Indices, Indices> split)
        : first_(std::move(first)), second_(std::move(second)), split_(std::move(split)) {}

    /// Average of the two views' vote fractions; label = score > 0.5.
    forest::Prediction predict(const Matrix& features) const;

    const forest::TrainedForest& first() const noexcept { return first_; }
    const forest::TrainedForest& second() const noexcept { return second_; }
    const std::pair<Indices, Indices>& split() const noexcept { return split_; }

private:
    forest::TrainedForest first_;
    forest::TrainedForest second_;
    std::pair<Indices, Indices> split_;
};

struct CoTrainResult {
    CoTrainModel model;
    std::size_t iterations = 0;
    std::size_t transferred = 0;
};

CoTrainResult co_train(const Matrix& labeled, const Labels& labels, const Matrix& unlabeled,
                       const CoTrainParams& params);

enum class Kernel { rbf, knn };

inline constexpr int kUnknown = -1;

struct GraphParams {
    Kernel kernel = Kernel::rbf;
    /// Unset means 1 / (f * mean column variance).
    std::optional<double> gamma;
    std::size_t k = 7;
    std::size_t max_iter = 1000;
    double tol = 1e-3;
    double alpha = 0.2;
    std::uint64_t seed = 0;
};

double default_gamma(const Matrix& features);

struct GraphResult {
    Labels labels;
    /// Row-stochastic class distribution, columns = (negative, positive).
    Matrix distribution;
    std::size_t iterations = 0;
    bool converged = false;
    /// Max absolute change after each iteration.
    std::vector<double> changes;
    /// Rows that received no mass from any labeled row; assigned the labeled prior.
    Indices unreached;
    double gamma = 0.0;
};

/// `labels` holds 0, 1 or kUnknown per row.
GraphResult label_propagation(const Matrix& features, const Labels& labels,
                              const GraphParams& params);
GraphResult label_spreading(const Matrix& features, const Labels& labels,
                            const GraphParams& params);

} // namespace frugal::baselines
