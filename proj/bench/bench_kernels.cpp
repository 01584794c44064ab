// Serial reference against OpenMP paths for the data-parallel kernels.
#include <benchmark/benchmark.h>

#include "frugal/forest.hpp"
#include "frugal/kernels.hpp"
#include "frugal/label_store.hpp"
#include "frugal/random.hpp"
#include "frugal/tuner.hpp"

using namespace frugal;

namespace {

Matrix random_matrix(std::size_t n, std::size_t f, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, f);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < f; ++j) m(i, j) = uniform01(rng);
    return m;
}

Labels sum_labels(const Matrix& x) {
    Labels y(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (double v : x.row(i)) s += v;
        y[i] = s > 0.5 * static_cast<double>(x.cols()) ? 1 : 0;
    }
    return y;
}

kernels::Execution mode(const benchmark::State& state) {
    return state.range(1) == 0 ? kernels::Execution::serial : kernels::Execution::parallel;
}

void BM_CountPairs(benchmark::State& state) {
    const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 5, 1);
    const std::vector<double> radii = {0.1, 0.2, 0.4, 0.8};
    for (auto _ : state) benchmark::DoNotOptimize(kernels::count_pairs_within(x, radii, mode(state)));
}
BENCHMARK(BM_CountPairs)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RbfAffinity(benchmark::State& state) {
    const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::rbf_affinity(x, 0.5, mode(state)));
}
BENCHMARK(BM_RbfAffinity)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TrainForest(benchmark::State& state) {
    const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 3);
    const auto y = sum_labels(x);
    forest::ForestParams p;
    for (auto _ : state) benchmark::DoNotOptimize(forest::train_forest(x, y, p, mode(state)));
}
BENCHMARK(BM_TrainForest)->ArgsProduct({{400, 1600}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TuneGrid(benchmark::State& state) {
    const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 10, 4);
    const auto y = sum_labels(x);
    Indices validation;
    for (std::size_t i = 0; i < x.rows(); i += 40) validation.push_back(i);
    tuner::TuneOptions opts;
    opts.exec = mode(state);
    opts.params.forest.tree_count = 20;
    for (auto _ : state) {
        LabelStore store(y, validation);
        benchmark::DoNotOptimize(tuner::tune(x, validation, store, opts));
    }
}
BENCHMARK(BM_TuneGrid)->ArgsProduct({{800}, {0, 1}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
