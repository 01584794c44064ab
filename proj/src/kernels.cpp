#include "frugal/kernels.hpp"

#include <algorithm>
#include <cmath>


namespace frugal::kernels {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

std::size_t pair_offset(std::size_t i, std::size_t n) noexcept {
    return i * n - i * (i + 1) / 2;
}

} // namespace

std::vector<double> pairwise_distances(const Matrix& x, Execution exec) {
    const std::size_t n = x.rows();
    std::vector<double> out(n < 2 ? 0 : n * (n - 1) / 2);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::parallel)
    for (std::ptrdiff_t si = 0; si < rows; ++si) {
        const auto i = static_cast<std::size_t>(si);
        const auto base = pair_offset(i, n);
        for (std::size_t j = i + 1; j < n; ++j)
            out[base + (j - i - 1)] = std::sqrt(squared_distance(x.row(i), x.row(j)));
    }
    return out;
}

std::vector<std::uint64_t> count_pairs_within(const Matrix& x, const std::vector<double>& radii,
                                              Execution exec) {
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t r = sorted.size();
    const std::size_t n = x.rows();
    // hist[p]: pairs whose distance is below sorted[p] but not below sorted[p-1].
    std::vector<std::uint64_t> hist(r + 1, 0);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel if (exec == Execution::parallel)
    {
        std::vector<std::uint64_t> local(r + 1, 0);
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t si = 0; si < rows; ++si) {
            const auto i = static_cast<std::size_t>(si);
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = std::sqrt(squared_distance(x.row(i), x.row(j)));
                const auto p = static_cast<std::size_t>(
                    std::upper_bound(sorted.begin(), sorted.end(), d) - sorted.begin());
                ++local[p];
            }
        }
#pragma omp critical
        for (std::size_t p = 0; p <= r; ++p) hist[p] += local[p];
    }
    std::vector<std::uint64_t> cumulative(r, 0);
    std::uint64_t running = 0;
    for (std::size_t p = 0; p < r; ++p) {
        running += hist[p];
        cumulative[p] = running;
    }
    std::vector<std::uint64_t> out(r);
    for (std::size_t k = 0; k < r; ++k) {
        const auto p = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), radii[k]) - sorted.begin());
        out[k] = cumulative[p];
    }
    return out;
}

std::uint64_t count_pairs_within(const Matrix& x, double r, Execution exec) {
    return count_pairs_within(x, std::vector<double>{r}, exec).front();
}

Matrix rbf_affinity(const Matrix& x, double gamma, Execution exec) {
    const std::size_t n = x.rows();
    Matrix w(n, n, 0.0);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::parallel)
    for (std::ptrdiff_t si = 0; si < rows; ++si) {
        const auto i = static_cast<std::size_t>(si);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) w(i, j) = std::exp(-gamma * squared_distance(x.row(i), x.row(j)));
    }
    return w;
}

Matrix knn_affinity(const Matrix& x, std::size_t k, Execution exec) {
    const std::size_t n = x.rows();
    k = std::min(k, n == 0 ? 0 : n - 1);
    std::vector<Indices> neighbours(n);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::parallel)
    for (std::ptrdiff_t si = 0; si < rows; ++si) {
        const auto i = static_cast<std::size_t>(si);
        std::vector<std::pair<double, std::size_t>> d;
        d.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d.emplace_back(squared_distance(x.row(i), x.row(j)), j);
        std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
        for (std::size_t m = 0; m < k; ++m) neighbours[i].push_back(d[m].second);
    }
    Matrix w(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (auto j : neighbours[i]) {
            w(i, j) = 1.0;
            w(j, i) = 1.0;
        }
    return w;
}

} // namespace frugal::kernels
