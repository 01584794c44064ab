#include <doctest.h>

#include <cmath>

#include "frugal/error.hpp"
#include "frugal/intrinsic.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace frugal;
using namespace frugal::intrinsic;

TEST_CASE("correlation integral fixtures") {
    const Matrix two = Matrix::from_rows({{0.0}, {1.0}});
    CHECK(correlation_integral(two, 2.0) == 1.0);
    CHECK(correlation_integral(two, 0.5) == 0.0);
    // Strict inequality at the exact distance.
    CHECK(correlation_integral(two, 1.0) == 0.0);
    const Matrix three = Matrix::from_rows({{0.0}, {1.0}, {2.0}});
    CHECK(correlation_integral(three, 1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(correlation_integral(Matrix::from_rows({{1.0}}), 1.0), Error);
    CHECK_THROWS_AS(correlation_integral(two, 0.0), Error);
}

TEST_CASE("correlation integral equals brute-force pair counting") {
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
        const auto n = 2 + uniform_index(rng, 40);
        const auto f = 1 + uniform_index(rng, 4);
        Matrix x(n, f);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < f; ++j) x(i, j) = static_cast<double>(uniform_index(rng, 5));
        const double r = 0.5 + 4.0 * uniform01(rng);
        const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
        CHECK(correlation_integral(x, r) == static_cast<double>(oracle::pairs_within(x, r)) / pairs);
        CHECK(kernels::count_pairs_within(x, r, kernels::Execution::serial) == oracle::pairs_within(x, r));
    }
}

TEST_CASE("uniform segment has dimension near one") {
    const auto p = intrinsic_dimension(testing::uniform_cube(200, 1, 3));
    CHECK_FALSE(p.degenerate);
    CHECK(p.dimension >= 0.8);
    CHECK(p.dimension <= 1.25);
}

TEST_CASE("uniform square has dimension near two") {
    const auto p = intrinsic_dimension(testing::uniform_cube(500, 2, 4));
    CHECK(p.dimension >= 1.6);
    CHECK(p.dimension <= 2.4);
}

TEST_CASE("duplicating every column leaves the dimension unchanged") {
    const Matrix x = testing::uniform_cube(300, 2, 5);
    Matrix dup(300, 4);
    for (std::size_t i = 0; i < 300; ++i)
        for (std::size_t j = 0; j < 2; ++j) dup(i, j) = dup(i, j + 2) = x(i, j);
    CHECK(std::abs(intrinsic_dimension(dup).dimension - intrinsic_dimension(x).dimension) <= 0.05);
}

TEST_CASE("global scaling leaves the dimension unchanged") {
    const Matrix x = testing::uniform_cube(200, 3, 6);
    for (double k : {0.001, 3.0, 1000.0}) {
        Matrix y = x;
        for (std::size_t i = 0; i < y.rows(); ++i)
            for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) *= k;
        CHECK(intrinsic_dimension(y).dimension == doctest::Approx(intrinsic_dimension(x).dimension).epsilon(1e-9));
    }
}

TEST_CASE("profile shape") {
    const auto p = intrinsic_dimension(testing::uniform_cube(150, 3, 7), 12);
    REQUIRE(p.radii.size() == 12);
    REQUIRE(p.correlation.size() == 12);
    REQUIRE(p.slopes.size() == 11);
    for (std::size_t k = 1; k < 12; ++k) {
        CHECK(p.radii[k] > p.radii[k - 1]);
        CHECK(p.correlation[k] >= p.correlation[k - 1]);
    }
    for (double c : p.correlation) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
    CHECK(p.dimension >= 0.0);
}

TEST_CASE("correlation integral is monotone in r") {
    const Matrix x = testing::uniform_cube(80, 2, 8);
    double last = 0.0;
    for (double r = 0.01; r < 2.0; r *= 1.3) {
        const double c = correlation_integral(x, r);
        CHECK(c >= last);
        last = c;
    }
}

TEST_CASE("identical points are degenerate") {
    const auto p = intrinsic_dimension(Matrix(20, 3, 4.2));
    CHECK(p.degenerate);
    CHECK(p.dimension == 0.0);
    CHECK_THROWS_AS(intrinsic_dimension(Matrix(5, 2)), Error);
}

TEST_CASE("min-max normalization") {
    const auto z = minmax_normalize(Matrix::from_rows({{1, 5}, {3, 5}, {2, 5}}));
    CHECK(z == Matrix::from_rows({{0, 0}, {1, 0}, {0.5, 0}}));
}
