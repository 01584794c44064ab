#pragma once

// Synthetic fixtures shared by the unit and acceptance suites.

#include <numeric>
#include <vector>

#include "frugal/cla.hpp"
#include "frugal/matrix.hpp"
#include "frugal/random.hpp"

namespace frugal::testing {

struct Planted {
    Matrix x;
    Labels clean;
    Labels noisy;
};

/// Uniform [0,1) features; y = 1 when the feature sum exceeds its `q` percentile.
/// `noise` is the probability of flipping each label in `noisy`.
inline Planted planted(std::size_t n, std::size_t f, double noise, std::uint64_t seed, double q = 0.7) {
    Rng rng(seed);
    Planted p{Matrix(n, f), Labels(n), Labels(n)};
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < f; ++j) {
            p.x(i, j) = uniform01(rng);
            sums[i] += p.x(i, j);
        }
    const double cut = cla::percentile(sums, q);
    for (std::size_t i = 0; i < n; ++i) {
        p.clean[i] = sums[i] > cut ? 1 : 0;
        p.noisy[i] = uniform01(rng) < noise ? 1 - p.clean[i] : p.clean[i];
    }
    return p;
}

/// Every feature is a shared latent uniform plus Gaussian jitter of scale `spread`;
/// y = 1 when the feature sum exceeds its `q` percentile.
inline Planted planted_latent(std::size_t n, std::size_t f, double spread, std::uint64_t seed,
                              double q = 0.7) {
    Rng rng(seed);
    Planted p{Matrix(n, f), Labels(n), Labels(n)};
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = uniform01(rng);
        for (std::size_t j = 0; j < f; ++j) {
            p.x(i, j) = t + spread * normal01(rng);
            sums[i] += p.x(i, j);
        }
    }
    const double cut = cla::percentile(sums, q);
    for (std::size_t i = 0; i < n; ++i) p.clean[i] = p.noisy[i] = sums[i] > cut ? 1 : 0;
    return p;
}

struct Labeled {
    Matrix x;
    Labels y;
};

/// Two isotropic Gaussian blobs in `dims` dimensions, centers `separation` apart on axis 0.
/// Class 0 rows come first.
inline Labeled two_blobs(std::size_t per_blob, double sigma, double separation, std::size_t dims,
                         std::uint64_t seed) {
    Rng rng(seed);
    Labeled out{Matrix(2 * per_blob, dims), Labels(2 * per_blob)};
    for (std::size_t i = 0; i < 2 * per_blob; ++i) {
        const int cls = i < per_blob ? 0 : 1;
        out.y[i] = cls;
        for (std::size_t j = 0; j < dims; ++j)
            out.x(i, j) = sigma * normal01(rng) + (j == 0 && cls == 1 ? separation : 0.0);
    }
    return out;
}

inline Matrix uniform_cube(std::size_t n, std::size_t dims, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(n, dims);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dims; ++j) x(i, j) = uniform01(rng);
    return x;
}

inline double accuracy(const Labels& a, const Labels& b) {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i] ? 1 : 0;
    return static_cast<double>(hit) / static_cast<double>(a.size());
}

inline Indices iota(std::size_t n) {
    Indices v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace frugal::testing
