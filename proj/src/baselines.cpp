#include "frugal/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "frugal/error.hpp"
#include "frugal/kernels.hpp"
#include "frugal/random.hpp"

namespace frugal::baselines {

namespace {

void require_both_classes(const Labels& labels, const char* who) {
    const bool pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!pos || !neg)
        throw Error(ErrorKind::Training, std::string(who) + ": labeled set needs both classes");
}

Matrix stack(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw Error(ErrorKind::ColumnMismatch, "labeled/unlabeled column mismatch");
    Matrix out(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
    for (std::size_t i = 0; i < b.rows(); ++i)
        std::copy(b.row(i).begin(), b.row(i).end(), out.row(a.rows() + i).begin());
    return out;
}

} // namespace

SelfTrainResult self_train(const Matrix& labeled, const Labels& labels, const Matrix& unlabeled,
                           const SelfTrainParams& params) {
    if (labels.size() != labeled.rows())
        throw Error(ErrorKind::InvalidInput, "self_train: label count does not match rows");
    if (!(params.probability_threshold > 0.5 && params.probability_threshold < 1.0))
        throw Error(ErrorKind::InvalidInput, "self_train: threshold must lie in (0.5, 1)");
    require_both_classes(labels, "self_train");
    if (unlabeled.rows() > 0 && unlabeled.cols() != labeled.cols())
        throw Error(ErrorKind::ColumnMismatch, "self_train: labeled/unlabeled column mismatch");

    Indices pool_rows;  // rows of `unlabeled` adopted so far
    Labels pool_labels = labels;
    std::vector<char> adopted(unlabeled.rows(), 0);
    std::vector<std::size_t> sizes{labeled.rows()};

    auto pool_matrix = [&] {
        return unlabeled.rows() == 0 ? labeled : stack(labeled, unlabeled.select_rows(pool_rows));
    };

    auto model = forest::train_forest(labeled, labels, params.forest);
    bool stale = false;
    std::size_t iterations = 0;
    for (; iterations < params.max_iter; ++iterations) {
        if (stale) {
            model = forest::train_forest(pool_matrix(), pool_labels, params.forest);
            stale = false;
        }
        Indices remaining;
        for (std::size_t i = 0; i < unlabeled.rows(); ++i)
            if (!adopted[i]) remaining.push_back(i);
        if (remaining.empty()) break;
        const auto pred = model.predict(unlabeled.select_rows(remaining));
        std::size_t added = 0;
        for (std::size_t k = 0; k < remaining.size(); ++k) {
            const double s = pred.scores[k];
            if (std::max(s, 1.0 - s) > params.probability_threshold) {
                adopted[remaining[k]] = 1;
                pool_rows.push_back(remaining[k]);
                pool_labels.push_back(s > 0.5 ? 1 : 0);
                ++added;
            }
        }
        if (added == 0) break;
        sizes.push_back(labeled.rows() + pool_rows.size());
        stale = true;
    }
    if (stale) model = forest::train_forest(pool_matrix(), pool_labels, params.forest);

    SelfTrainResult out{std::move(model), pool_rows,
                        Labels(pool_labels.begin() + static_cast<std::ptrdiff_t>(labels.size()),
                               pool_labels.end()),
                        std::move(sizes), iterations};
    return out;
}

std::pair<Indices, Indices> even_odd_split(std::size_t feature_count) {
    std::pair<Indices, Indices> split;
    for (std::size_t j = 0; j < feature_count; ++j) (j % 2 == 0 ? split.first : split.second).push_back(j);
    return split;
}

forest::Prediction CoTrainModel::predict(const Matrix& features) const {
    auto a = first_.predict(features.select_cols(split_.first));
    auto b = second_.predict(features.select_cols(split_.second));
    forest::Prediction out;
    out.scores.resize(features.rows());
    out.labels.resize(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        out.scores[i] = (a.scores[i] + b.scores[i]) / 2.0;
        out.labels[i] = out.scores[i] > 0.5 ? 1 : 0;
    }
    return out;
}

CoTrainResult co_train(const Matrix& labeled, const Labels& labels, const Matrix& unlabeled,
                       const CoTrainParams& params) {
    if (labels.size() != labeled.rows())
        throw Error(ErrorKind::InvalidInput, "co_train: label count does not match rows");
    require_both_classes(labels, "co_train");
    auto split = params.split ? *params.split : even_odd_split(labeled.cols());
    if (split.first.empty() || split.second.empty())
        throw Error(ErrorKind::InvalidInput, "co_train: each view needs at least one feature");
    {
        std::set<std::size_t> seen;
        for (auto j : split.first) seen.insert(j);
        for (auto j : split.second)
            if (!seen.insert(j).second) throw Error(ErrorKind::InvalidInput, "co_train: views overlap");
        if (seen.size() != labeled.cols() || *seen.rbegin() >= labeled.cols())
            throw Error(ErrorKind::InvalidInput, "co_train: views must cover every feature");
    }

    const Matrix all = unlabeled.rows() == 0 ? labeled : stack(labeled, unlabeled);
    const Matrix view_a = all.select_cols(split.first);
    const Matrix view_b = all.select_cols(split.second);
    forest::ForestParams pa = params.forest, pb = params.forest;
    pa.seed = derive_seed({params.forest.seed, 1});
    pb.seed = derive_seed({params.forest.seed, 2});

    Indices pool_a(labeled.rows()), pool_b;
    std::iota(pool_a.begin(), pool_a.end(), 0);
    pool_b = pool_a;
    Labels labels_a = labels, labels_b = labels;
    std::vector<char> open(all.rows(), 0);
    for (std::size_t i = labeled.rows(); i < all.rows(); ++i) open[i] = 1;

    auto fit = [](const Matrix& view, const Indices& pool, const Labels& y,
                  const forest::ForestParams& p) {
        return forest::train_forest(view.select_rows(pool), y, p);
    };
    // Top-k remaining rows by |score - 0.5|, ties to the lower index.
    auto most_confident = [&](const forest::TrainedForest& model, const Matrix& view,
                              const Indices& remaining) {
        const auto pred = model.predict(view.select_rows(remaining));
        std::vector<std::size_t> order(remaining.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return std::abs(pred.scores[x] - 0.5) > std::abs(pred.scores[y] - 0.5);
        });
        order.resize(std::min(order.size(), params.k_per_iter));
        std::vector<std::pair<std::size_t, int>> picks;
        for (auto o : order) picks.emplace_back(remaining[o], pred.labels[o]);
        return picks;
    };

    std::size_t iterations = 0, transferred = 0;
    if (params.k_per_iter > 0) {
        for (; iterations < params.max_iter; ++iterations) {
            Indices remaining;
            for (std::size_t i = 0; i < all.rows(); ++i)
                if (open[i]) remaining.push_back(i);
            if (remaining.empty()) break;
            const auto model_a = fit(view_a, pool_a, labels_a, pa);
            const auto model_b = fit(view_b, pool_b, labels_b, pb);
            const auto from_a = most_confident(model_a, view_a, remaining);
            const auto from_b = most_confident(model_b, view_b, remaining);
            for (auto [row, label] : from_a) {
                pool_b.push_back(row);
                labels_b.push_back(label);
                open[row] = 0;
            }
            for (auto [row, label] : from_b) {
                pool_a.push_back(row);
                labels_a.push_back(label);
                open[row] = 0;
            }
            transferred += from_a.size() + from_b.size();
        }
    }
    CoTrainModel model(fit(view_a, pool_a, labels_a, pa), fit(view_b, pool_b, labels_b, pb),
                       std::move(split));
    return {std::move(model), iterations, transferred};
}

double default_gamma(const Matrix& features) {
    if (features.rows() == 0 || features.cols() == 0) return 1.0;
    double total = 0.0;
    for (std::size_t j = 0; j < features.cols(); ++j) {
        const auto col = features.column(j);
        const double m = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
        double v = 0.0;
        for (double x : col) v += (x - m) * (x - m);
        total += v / static_cast<double>(col.size());
    }
    const double mean_var = total / static_cast<double>(features.cols());
    if (!(mean_var > 0.0)) return 1.0;
    return 1.0 / (static_cast<double>(features.cols()) * mean_var);
}

namespace {

enum class Clamp { hard, soft };

void validate_graph_input(const Matrix& features, const Labels& labels, const GraphParams& p) {
    if (labels.size() != features.rows())
        throw Error(ErrorKind::InvalidInput, "graph: label count does not match rows");
    bool pos = false, neg = false;
    for (int y : labels) {
        if (y == 1) pos = true;
        else if (y == 0) neg = true;
        else if (y != kUnknown) throw Error(ErrorKind::InvalidInput, "graph: labels must be 0, 1 or unknown");
    }
    if (!pos || !neg) throw Error(ErrorKind::Training, "graph: need a known label for each class");
    if (p.gamma && !(*p.gamma > 0.0)) throw Error(ErrorKind::InvalidInput, "graph: gamma must be > 0");
    if (p.kernel == Kernel::knn && p.k < 1) throw Error(ErrorKind::InvalidInput, "graph: k must be >= 1");
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        throw Error(ErrorKind::InvalidInput, "graph: alpha must lie in (0, 1)");
    if (p.max_iter < 1) throw Error(ErrorKind::InvalidInput, "graph: max_iter must be >= 1");
}

GraphResult iterate_graph(const Matrix& features, const Labels& labels, const GraphParams& p,
                          Clamp clamp) {
    validate_graph_input(features, labels, p);
    require_finite(features, "graph");
    const std::size_t n = features.rows();
    GraphResult out;
    out.gamma = p.gamma ? *p.gamma : default_gamma(features);
    Matrix w = p.kernel == Kernel::rbf ? kernels::rbf_affinity(features, out.gamma)
                                       : kernels::knn_affinity(features, p.k);

    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = w.row(i);
        degree[i] = std::accumulate(r.begin(), r.end(), 0.0);
    }
    // Transition operator, built in place over w.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (clamp == Clamp::hard) {
                w(i, j) = degree[i] > 0.0 ? w(i, j) / degree[i] : 0.0;
            } else {
                const double d = degree[i] * degree[j];
                w(i, j) = d > 0.0 ? w(i, j) / std::sqrt(d) : 0.0;
            }
        }
    }

    Matrix seed(n, 2, 0.0);
    std::size_t known_pos = 0, known = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == kUnknown) continue;
        seed(i, static_cast<std::size_t>(labels[i])) = 1.0;
        ++known;
        known_pos += labels[i] == 1 ? 1 : 0;
    }

    Matrix y = seed, next(n, 2);
    for (std::size_t it = 0; it < p.max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double a = 0.0, b = 0.0;
            const auto row = w.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                a += row[j] * y(j, 0);
                b += row[j] * y(j, 1);
            }
            if (clamp == Clamp::hard) {
                if (labels[i] != kUnknown) {
                    a = seed(i, 0);
                    b = seed(i, 1);
                }
            } else {
                a = p.alpha * a + (1.0 - p.alpha) * seed(i, 0);
                b = p.alpha * b + (1.0 - p.alpha) * seed(i, 1);
            }
            next(i, 0) = a;
            next(i, 1) = b;
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < 2; ++c) change = std::max(change, std::abs(next(i, c) - y(i, c)));
        std::swap(y, next);
        out.changes.push_back(change);
        out.iterations = it + 1;
        if (change < p.tol) {
            out.converged = true;
            break;
        }
    }

    const double prior = static_cast<double>(known_pos) / static_cast<double>(known);
    Rng rng(derive_seed(p.seed, "graph-ties"));
    auto pick = [&](double neg, double pos) {
        if (pos > neg) return 1;
        if (neg > pos) return 0;
        return static_cast<int>(uniform_index(rng, 2));
    };
    out.labels.resize(n);
    out.distribution = Matrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double total = y(i, 0) + y(i, 1);
        if (!(total > 0.0)) {
            out.unreached.push_back(i);
            out.distribution(i, 0) = 1.0 - prior;
            out.distribution(i, 1) = prior;
        } else {
            out.distribution(i, 0) = y(i, 0) / total;
            out.distribution(i, 1) = y(i, 1) / total;
        }
        out.labels[i] = pick(out.distribution(i, 0), out.distribution(i, 1));
    }
    return out;
}

} // namespace

GraphResult label_propagation(const Matrix& features, const Labels& labels, const GraphParams& params) {
    return iterate_graph(features, labels, params, Clamp::hard);
}

GraphResult label_spreading(const Matrix& features, const Labels& labels, const GraphParams& params) {
    return iterate_graph(features, labels, params, Clamp::soft);
}

} // namespace frugal::baselines
