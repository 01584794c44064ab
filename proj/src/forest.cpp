#include "frugal/forest.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "frugal/error.hpp"
#include "frugal/random.hpp"

namespace frugal::forest {

std::size_t features_per_split(std::size_t feature_count) noexcept {
    auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(feature_count))));
    return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(feature_count, 1));
}

const Node& Tree::leaf_for(std::span<const double> row) const noexcept {
    std::size_t at = 0;
    while (nodes_[at].feature >= 0) {
        const auto& n = nodes_[at];
        at = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[at];
}

int Tree::vote(std::span<const double> row) const noexcept {
    const auto& leaf = leaf_for(row);
    return leaf.positives > leaf.negatives ? 1 : 0;
}

double Tree::leaf_probability(std::span<const double> row) const noexcept {
    const auto& leaf = leaf_for(row);
    return static_cast<double>(leaf.positives) /
           static_cast<double>(leaf.positives + leaf.negatives);
}

std::size_t Tree::depth() const {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [at, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes_[at].feature >= 0) {
            stack.emplace_back(nodes_[at].left, d + 1);
            stack.emplace_back(nodes_[at].right, d + 1);
        }
    }
    return deepest;
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double purity = -1.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const Labels& y, const ForestParams& params, std::uint64_t seed)
        : x_(x), y_(y), params_(params), rng_(seed), mtry_(features_per_split(x.cols())),
          order_(x.cols()) {
        for (std::size_t j = 0; j < order_.size(); ++j) order_[j] = j;
        scratch_.reserve(x.rows());
    }

    Tree build() {
        const std::size_t n = x_.rows();
        rows_.resize(n);
        if (params_.bootstrap) {
            for (auto& r : rows_) r = uniform_index(rng_, n);
        } else {
            for (std::size_t i = 0; i < n; ++i) rows_[i] = i;
        }
        nodes_.clear();
        grow(0, n, 0);
        return Tree(std::move(nodes_));
    }

private:
    std::uint32_t grow(std::size_t begin, std::size_t end, std::size_t depth) {
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        std::uint32_t pos = 0;
        for (std::size_t i = begin; i < end; ++i) pos += static_cast<std::uint32_t>(y_[rows_[i]]);
        const auto size = static_cast<std::uint32_t>(end - begin);
        nodes_[id].positives = pos;
        nodes_[id].negatives = size - pos;

        const bool pure = pos == 0 || pos == size;
        const bool depth_cap = params_.max_depth && depth >= *params_.max_depth;
        if (pure || depth_cap || size < params_.min_samples_split) return id;

        const Split split = best_split(begin, end, pos);
        if (split.feature < 0) return id;

        const auto f = static_cast<std::size_t>(split.feature);
        auto mid = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                  rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                  [&](std::size_t r) { return x_(r, f) <= split.threshold; });
        const auto cut = static_cast<std::size_t>(mid - rows_.begin());
        nodes_[id].feature = split.feature;
        nodes_[id].threshold = split.threshold;
        const auto left = grow(begin, cut, depth + 1);
        const auto right = grow(cut, end, depth + 1);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    // Features are visited in a random order; sampling continues past constant
    // features until mtry usable ones have been scored.
    Split best_split(std::size_t begin, std::size_t end, std::uint32_t total_pos) {
        Split best;
        const auto n = static_cast<double>(end - begin);
        std::size_t usable = 0;
        for (std::size_t k = 0; k < order_.size() && usable < mtry_; ++k) {
            const auto pick = k + uniform_index(rng_, order_.size() - k);
            std::swap(order_[k], order_[pick]);
            const auto f = order_[k];

            scratch_.clear();
            for (std::size_t i = begin; i < end; ++i)
                scratch_.emplace_back(x_(rows_[i], f), y_[rows_[i]]);
            std::sort(scratch_.begin(), scratch_.end());
            if (scratch_.front().first == scratch_.back().first) continue;
            ++usable;

            double left_pos = 0.0;
            const double all_pos = static_cast<double>(total_pos);
            for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
                left_pos += scratch_[i].second;
                if (scratch_[i].first == scratch_[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                const double right_pos = all_pos - left_pos;
                const double left_neg = nl - left_pos;
                const double right_neg = nr - right_pos;
                // Maximizing this minimizes the size-weighted Gini impurity.
                const double purity = (left_pos * left_pos + left_neg * left_neg) / nl +
                                      (right_pos * right_pos + right_neg * right_neg) / nr;
                if (purity > best.purity) {
                    const double lo = scratch_[i].first;
                    const double hi = scratch_[i + 1].first;
                    double t = lo + (hi - lo) / 2.0;
                    if (!(t < hi)) t = lo;
                    best = {static_cast<int>(f), t, purity};
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const Labels& y_;
    const ForestParams& params_;
    Rng rng_;
    std::size_t mtry_;
    Indices order_;
    Indices rows_;
    std::vector<Node> nodes_;
    std::vector<std::pair<double, int>> scratch_;
};

} // namespace

TrainedForest train_forest(const Matrix& features, const Labels& labels, const ForestParams& params,
                           kernels::Execution exec) {
    if (params.tree_count < 1) throw Error(ErrorKind::InvalidInput, "tree_count must be >= 1");
    if (params.min_samples_split < 1)
        throw Error(ErrorKind::InvalidInput, "min_samples_split must be >= 1");
    if (params.max_depth && *params.max_depth < 1)
        throw Error(ErrorKind::InvalidInput, "max_depth must be >= 1");
    if (features.rows() < 2) throw Error(ErrorKind::Training, "need at least 2 training rows");
    if (labels.size() != features.rows())
        throw Error(ErrorKind::InvalidInput, "label count does not match rows");
    if (features.cols() == 0) throw Error(ErrorKind::Training, "no feature columns");
    require_finite(features, "train_forest");
    const auto positives = std::count(labels.begin(), labels.end(), 1);
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size()))
        throw Error(ErrorKind::Training, "training labels contain a single class");

    const auto count = static_cast<std::ptrdiff_t>(params.tree_count);
    std::vector<std::optional<Tree>> built(params.tree_count);
#pragma omp parallel for schedule(dynamic) if (exec == kernels::Execution::parallel)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        TreeBuilder builder(features, labels, params,
                            derive_seed({params.seed, static_cast<std::uint64_t>(t)}));
        built[static_cast<std::size_t>(t)].emplace(builder.build());
    }
    std::vector<Tree> trees;
    trees.reserve(built.size());
    for (auto& t : built) trees.push_back(std::move(*t));
    return TrainedForest(std::move(trees), params, features.cols());
}

void TrainedForest::check_columns(const Matrix& features) const {
    if (features.cols() != feature_count_)
        throw Error(ErrorKind::ColumnMismatch, "forest trained on " + std::to_string(feature_count_) +
                                                   " columns, got " +
                                                   std::to_string(features.cols()));
}

Prediction TrainedForest::predict(const Matrix& features) const {
    check_columns(features);
    Prediction out;
    out.labels.resize(features.rows());
    out.scores.resize(features.rows());
    const auto n = static_cast<std::ptrdiff_t>(features.rows());
    const double trees = static_cast<double>(trees_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto row = features.row(static_cast<std::size_t>(i));
        std::size_t votes = 0;
        for (const auto& tree : trees_) votes += static_cast<std::size_t>(tree.vote(row));
        const double score = static_cast<double>(votes) / trees;
        out.scores[static_cast<std::size_t>(i)] = score;
        out.labels[static_cast<std::size_t>(i)] = score > 0.5 ? 1 : 0;
    }
    return out;
}

std::vector<double> TrainedForest::predict_proba(const Matrix& features) const {
    check_columns(features);
    std::vector<double> out(features.rows());
    const auto n = static_cast<std::ptrdiff_t>(features.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto row = features.row(static_cast<std::size_t>(i));
        double sum = 0.0;
        for (const auto& tree : trees_) sum += tree.leaf_probability(row);
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(trees_.size());
    }
    return out;
}

} // namespace frugal::forest
