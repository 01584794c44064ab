#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frugal/kernels.hpp"
#include "frugal/matrix.hpp"

namespace frugal::forest {

struct ForestParams {
    std::size_t tree_count = 100;
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_split = 2;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

/// floor(sqrt(f)), at least 1.
std::size_t features_per_split(std::size_t feature_count) noexcept;

struct Node {
    /// -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t negatives = 0;
    std::uint32_t positives = 0;
};

/// Axis-aligned binary tree; rows with value <= threshold go left.
class Tree {
public:
    explicit Tree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    const Node& leaf_for(std::span<const double> row) const noexcept;
    /// Majority class of the leaf; an even split votes negative.
    int vote(std::span<const double> row) const noexcept;
    /// Positive fraction of the training rows in the leaf.
    double leaf_probability(std::span<const double> row) const noexcept;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;

private:
    std::vector<Node> nodes_;
};

struct Prediction {
    Labels labels;
    /// Fraction of trees voting positive.
    std::vector<double> scores;
};

class TrainedForest {
public:
    TrainedForest(std::vector<Tree> trees, ForestParams params, std::size_t feature_count)
        : trees_(std::move(trees)), params_(params), feature_count_(feature_count) {}

    /// Score = fraction of positive tree votes; label = score > 0.5.
    Prediction predict(const Matrix& features) const;
    /// Mean leaf class frequency across trees (soft vote).
    std::vector<double> predict_proba(const Matrix& features) const;

    const std::vector<Tree>& trees() const noexcept { return trees_; }
    const ForestParams& params() const noexcept { return params_; }
    std::size_t feature_count() const noexcept { return feature_count_; }

private:
    void check_columns(const Matrix& features) const;

    std::vector<Tree> trees_;
    ForestParams params_;
    std::size_t feature_count_;
};

/// Gini-impurity CART ensemble. Tree t draws its randomness from
/// derive_seed(params.seed, t), so results do not depend on execution mode.
TrainedForest train_forest(const Matrix& features, const Labels& labels, const ForestParams& params,
                           kernels::Execution exec = kernels::Execution::parallel);

} // namespace frugal::forest
