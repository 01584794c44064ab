#include <doctest.h>

#include <set>

#include "frugal/cla.hpp"
#include "frugal/error.hpp"
#include "frugal/random.hpp"
#include "support/oracles.hpp"

using namespace frugal;
using namespace frugal::cla;

namespace {

Matrix worked_example() { return Matrix::from_rows({{0, 10}, {10, 0}, {10, 10}, {0, 0}}); }

std::vector<std::vector<double>> random_rows(Rng& rng, std::size_t n, std::size_t f) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(f));
    for (auto& r : rows)
        for (auto& v : r) v = static_cast<double>(uniform_index(rng, 7));  // small range forces ties
    return rows;
}

} // namespace

TEST_CASE("feature cutoffs interpolate between order statistics") {
    CHECK(feature_cutoffs(Matrix::from_rows({{1}, {2}, {3}, {4}}), 0.5).values[0] == 2.5);
    for (double c : {0.05, 0.5, 0.95}) CHECK(feature_cutoffs(Matrix::from_rows({{5}, {5}, {5}}), c).values[0] == 5.0);
    CHECK(feature_cutoffs(Matrix::from_rows({{1}, {2}, {9}, {10}}), 0.5).values[0] == 5.5);
    CHECK(percentile({1, 2, 3, 4, 5}, 0.25) == 2.0);
    CHECK(percentile({0, 10}, 0.7) == doctest::Approx(7.0));
}

TEST_CASE("feature cutoffs reject bad input") {
    CHECK_THROWS_AS(feature_cutoffs(Matrix::from_rows({{1.0}, {std::nan("")}}), 0.5), Error);
    CHECK_THROWS_AS(feature_cutoffs(Matrix::from_rows({{1.0}}), 0.0), Error);
    CHECK_THROWS_AS(feature_cutoffs(Matrix::from_rows({{1.0}}), 1.0), Error);
    CHECK_THROWS_AS(feature_cutoffs(Matrix(), 0.5), Error);
}

TEST_CASE("cla pseudo-labels the worked examples") {
    auto a = cla_pseudo_label(Matrix::from_rows({{1, 1}, {2, 2}, {9, 9}, {10, 10}}), 0.5);
    CHECK(a.counts == std::vector<int>{0, 0, 2, 2});
    CHECK(a.median_count == 1.0);
    CHECK(a.labels == Labels{0, 0, 1, 1});

    auto b = cla_pseudo_label(worked_example(), 0.5);
    CHECK(b.counts == std::vector<int>{1, 1, 2, 0});
    CHECK(b.median_count == 1.0);
    CHECK(b.labels == Labels{0, 0, 1, 0});

    auto c = cla_pseudo_label(Matrix::from_rows({{1}, {2}}), 0.5);
    CHECK(c.counts == std::vector<int>{0, 1});
    CHECK(c.median_count == 0.5);
    CHECK(c.labels == Labels{0, 1});
}

TEST_CASE("cla agrees with the brute-force oracle on random matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = 1 + uniform_index(rng, 20);
        const auto f = 1 + uniform_index(rng, 5);
        const auto rows = random_rows(rng, n, f);
        const double c = static_cast<double>(1 + uniform_index(rng, 19)) * 0.05;
        const auto expect = oracle::cla(rows, c);
        const auto got = cla_pseudo_label(Matrix::from_rows(rows), c);
        REQUIRE(got.counts == expect.counts);
        REQUIRE(got.median_count == expect.median);
        REQUIRE(got.labels == expect.labels);
    }
}

TEST_CASE("violation scores") {
    const Cutoffs half{0.5, {5, 5}};
    CHECK(violation_scores(Matrix::from_rows({{9, 9}, {8, 7}}), {1, 1}, half) ==
          std::vector<std::size_t>{0, 0});
    CHECK(violation_scores(worked_example(), {0, 0, 1, 0}, half) == std::vector<std::size_t>{1, 1});
    CHECK(violation_scores(Matrix::from_rows({{9, 9}, {8, 7}}), {0, 0}, half) ==
          std::vector<std::size_t>{2, 2});
    CHECK_THROWS_AS(violation_scores(worked_example(), {0, 1}, half), Error);
}

TEST_CASE("clafi on the worked example") {
    const auto pl = cla_pseudo_label(worked_example(), 0.5);
    const auto t = clafi_select(worked_example(), pl.labels, feature_cutoffs(worked_example(), 0.5));
    CHECK(t.scores == std::vector<std::size_t>{1, 1});
    CHECK(t.selected_features == Indices{0, 1});
    CHECK(t.kept_instances == Indices{2, 3});
    CHECK(t.kept_labels == Labels{1, 0});
    CHECK(t.fallback_level == 0);
}

TEST_CASE("clafi keeps everything on monotone data") {
    const Matrix x = Matrix::from_rows({{1, 2}, {2, 3}, {8, 9}, {9, 10}});
    const auto pl = cla_pseudo_label(x, 0.5);
    const auto t = clafi_select(x, pl.labels, feature_cutoffs(x, 0.5));
    CHECK(t.kept_instances == Indices{0, 1, 2, 3});
    CHECK(t.scores == std::vector<std::size_t>{0, 0});
}

TEST_CASE("clafi falls back to the next score level") {
    // f0 violates on rows {0,1,3,4}; f1 on the three positives. The minimum
    // level (f1) keeps only negatives, so f0 is tried next.
    const Matrix x = Matrix::from_rows({{0, 0}, {0, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 0}});
    const Labels y = {1, 1, 1, 0, 0, 0};
    const auto t = clafi_select(x, y, Cutoffs{0.5, {0.5, 0.5}});
    CHECK(t.scores == std::vector<std::size_t>{4, 3});
    CHECK(t.selected_features == Indices{0});
    CHECK(t.kept_instances == Indices{2, 5});
    CHECK(t.fallback_level == 1);
}

TEST_CASE("clafi signals degenerate input") {
    const Matrix same = Matrix::from_rows({{3, 3}, {3, 3}, {3, 3}, {3, 3}});
    try {
        clafi_select(same, {1, 0, 1, 0}, feature_cutoffs(same, 0.5));
        FAIL("expected degenerate clafi");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateClafi);
    }
}

TEST_CASE("positive affine rescaling leaves CLA and violations unchanged") {
    Rng rng(99);
    const double slopes[] = {0.5, 2.0, 4.0, 1.0};
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = 2 + uniform_index(rng, 18);
        const auto f = 1 + uniform_index(rng, 5);
        const Matrix x = Matrix::from_rows(random_rows(rng, n, f));
        Matrix y = x;
        for (std::size_t j = 0; j < f; ++j) {
            const double a = slopes[uniform_index(rng, 4)];
            const double b = static_cast<double>(uniform_index(rng, 9)) - 4.0;
            for (std::size_t i = 0; i < n; ++i) y(i, j) = a * x(i, j) + b;
        }
        const double c = static_cast<double>(1 + uniform_index(rng, 19)) * 0.05;
        const auto px = cla_pseudo_label(x, c);
        const auto py = cla_pseudo_label(y, c);
        REQUIRE(px.counts == py.counts);
        REQUIRE(px.labels == py.labels);
        REQUIRE(violation_scores(x, px.labels, feature_cutoffs(x, c)) ==
                violation_scores(y, py.labels, feature_cutoffs(y, c)));
    }
}

TEST_CASE("clafi selection invariants") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = 2 + uniform_index(rng, 18);
        const auto f = 1 + uniform_index(rng, 5);
        const Matrix x = Matrix::from_rows(random_rows(rng, n, f));
        const auto cut = feature_cutoffs(x, 0.5);
        const auto pl = cla_pseudo_label(x, cut);
        try {
            const auto t = clafi_select(x, pl.labels, cut);
            CHECK_FALSE(t.selected_features.empty());
            CHECK(std::set<int>(t.kept_labels.begin(), t.kept_labels.end()).size() == 2);
            for (auto i : t.kept_instances) CHECK(i < n);
            for (auto s : t.scores) CHECK(s <= n);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateClafi);
        }
    }
}
