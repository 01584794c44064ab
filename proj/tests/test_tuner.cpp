#include <doctest.h>

#include <algorithm>
#include <set>

#include "frugal/cla.hpp"
#include "frugal/dataset.hpp"
#include "frugal/error.hpp"
#include "frugal/metrics.hpp"
#include "frugal/tuner.hpp"
#include "support/synthetic.hpp"

using namespace frugal;
using namespace frugal::tuner;

namespace {

LearnerParams small_forest(std::uint64_t seed, std::size_t trees = 20) {
    LearnerParams p;
    p.forest.tree_count = trees;
    p.forest.seed = seed;
    return p;
}

Indices validation_slice(const Labels& y, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    const auto all = testing::iota(y.size());
    return stratified_subset(all, y, count, rng);
}

double balanced(const Labels& y, const Labels& pred) {
    return objective_value("balanced", y, pred, std::vector<double>(y.size(), 0.0));
}

} // namespace

TEST_CASE("percentile grid and mode names") {
    const auto grid = percentile_grid();
    CHECK(grid.front() == doctest::Approx(0.05));
    CHECK(grid.back() == doctest::Approx(0.95));
    for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] - grid[k - 1] == doctest::Approx(0.05));
    for (auto m : kModes) CHECK(parse_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_mode("CLAMI"), Error);
}

TEST_CASE("tune evaluates the full grid in config order") {
    const auto p = testing::planted(200, 4, 0.0, 3);
    const auto val = validation_slice(p.clean, 20, 1);
    LabelStore store(p.clean, val);
    const auto r = tune(p.x, val, store, TuneOptions{.params = small_forest(1, 5)});
    REQUIRE(r.table.size() == 57);
    for (std::size_t k = 0; k < r.table.size(); ++k) {
        CHECK(r.table[k].mode == kModes[k % 3]);
        CHECK(r.table[k].percentile == percentile_grid()[k / 3]);
    }
    double top = -1.0;
    for (const auto& row : r.table)
        if (!row.failed) top = std::max(top, row.score);
    CHECK(r.best_score == top);
    CHECK(r.objective == "balanced");
}

TEST_CASE("ties go to the smaller percentile then the earlier mode") {
    const auto p = testing::planted(120, 3, 0.0, 4);
    const auto val = validation_slice(p.clean, 12, 2);
    LabelStore store(p.clean, val);
    // Cost is the same for every configuration, so every row ties.
    const auto r = tune(p.x, val, store, TuneOptions{.objective = "cost", .params = small_forest(1, 3)});
    CHECK(r.best.percentile == percentile_grid()[0]);
    CHECK(r.best.mode == Mode::cla);
}

TEST_CASE("tune reads exactly the validation labels") {
    const auto p = testing::planted(300, 4, 0.1, 5);
    const auto val = validation_slice(p.clean, 15, 3);
    LabelStore store(p.clean, val);
    tune(p.x, val, store, TuneOptions{.params = small_forest(2, 5)});
    CHECK(store.access_count() == val.size());
}

TEST_CASE("tune rejects bad requests") {
    const auto p = testing::planted(60, 3, 0.0, 6);
    const auto val = validation_slice(p.clean, 10, 4);
    LabelStore store(p.clean, val);
    try {
        tune(p.x, val, store, TuneOptions{.objective = "mcc"});
        FAIL("expected unknown objective");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownObjective);
    }
    CHECK_THROWS_AS(tune(p.x, {}, store), Error);
    CHECK_THROWS_AS(tune(p.x, val, store, TuneOptions{.objective = "aod"}), Error);
    CHECK_FALSE(is_objective("mcc"));
    CHECK(is_objective("balanced"));
    CHECK(is_objective("di"));
}

TEST_CASE("planted threshold is recovered by the grid") {
    int in_band = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        // Correlated features, as defect metrics usually are.
        const auto p = testing::planted_latent(1000, 5, 0.05, 500 + seed);
        // Full-label oracle: the CLA percentile that best matches the planted rule.
        double oracle_score = -1.0, oracle_c = 0.0;
        for (double c : percentile_grid()) {
            const double s = balanced(p.clean, cla::cla_pseudo_label(p.x, c).labels);
            if (s > oracle_score) oracle_score = s, oracle_c = c;
        }
        CHECK(oracle_c >= 0.599);
        CHECK(oracle_c <= 0.801);

        const auto val = validation_slice(p.clean, 50, seed);
        LabelStore store(p.clean, val);
        const auto r = tune(p.x, val, store, TuneOptions{.params = small_forest(seed)});
        if (r.best.percentile >= 0.599 && r.best.percentile <= 0.801) ++in_band;
    }
    CHECK(in_band >= 8);
}

TEST_CASE("CLA mode labels the test rows directly") {
    const Matrix x = Matrix::from_rows({{0, 10}, {10, 0}, {10, 10}, {0, 0}});
    const auto fit = fit_predict(FrugalConfig{Mode::cla, 0.5, {}}, Matrix(1, 2), x);
    CHECK(fit.labels == Labels{0, 0, 1, 0});
    CHECK(fit.labels == cla::cla_pseudo_label(x, 0.5).labels);
    CHECK(fit.scores == std::vector<double>{0.5, 0.5, 1.0, 0.0});
}

TEST_CASE("CLA_ML reproduces a monotone rule") {
    Matrix train(100, 3), test(100, 3);
    for (std::size_t i = 0; i < 100; ++i) {
        const double t = static_cast<double>(i);
        for (auto* m : {&train, &test}) {
            const double v = m == &train ? t : t + 0.25;
            (*m)(i, 0) = v;
            (*m)(i, 1) = 2.0 * v;
            (*m)(i, 2) = v + 5.0;
        }
    }
    const auto cut = cla::feature_cutoffs(train, 0.5).values[0];
    Labels rule(100);
    for (std::size_t i = 0; i < 100; ++i) rule[i] = test(i, 0) > cut ? 1 : 0;
    const auto fit = fit_predict(FrugalConfig{Mode::cla_ml, 0.5, small_forest(1)}, train, test);
    CHECK(testing::accuracy(fit.labels, rule) == 1.0);
}

TEST_CASE("CLAFI drops the noise feature") {
    int excluded = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        // A correlated signal group (columns 0-2) and one independent noise column.
        Matrix x(300, 4);
        for (std::size_t i = 0; i < 300; ++i) {
            const double s = uniform01(rng);
            for (std::size_t j = 0; j < 3; ++j) x(i, j) = s + 0.05 * normal01(rng);
            x(i, 3) = uniform01(rng);
        }
        const auto cut = cla::feature_cutoffs(x, 0.5);
        const auto pl = cla::cla_pseudo_label(x, cut);
        const auto scores = cla::violation_scores(x, pl.labels, cut);
        CHECK(scores[3] > std::max({scores[0], scores[1], scores[2]}));
        const auto t = cla::clafi_select(x, pl.labels, cut);
        if (std::find(t.selected_features.begin(), t.selected_features.end(), 3) ==
            t.selected_features.end())
            ++excluded;
        const auto fit = fit_predict(FrugalConfig{Mode::clafi_ml, 0.5, small_forest(seed, 5)}, x, x);
        CHECK_FALSE(fit.fell_back);
    }
    CHECK(excluded >= 9);
}

TEST_CASE("degenerate CLAFI falls back to CLA_ML") {
    // Search small random matrices for one where CLA gives both classes but no
    // violation level keeps both.
    Rng rng(31);
    int found = 0;
    for (int trial = 0; trial < 5000 && found < 3; ++trial) {
        Matrix x(6, 2);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 2; ++j) x(i, j) = static_cast<double>(uniform_index(rng, 4));
        const auto cut = cla::feature_cutoffs(x, 0.5);
        const auto pl = cla::cla_pseudo_label(x, cut);
        if (std::set<int>(pl.labels.begin(), pl.labels.end()).size() < 2) continue;
        try {
            cla::clafi_select(x, pl.labels, cut);
            continue;
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::DegenerateClafi);
        }
        ++found;
        const auto fit = fit_predict(FrugalConfig{Mode::clafi_ml, 0.5, small_forest(1, 5)}, x, x);
        const auto plain = fit_predict(FrugalConfig{Mode::cla_ml, 0.5, small_forest(1, 5)}, x, x);
        CHECK(fit.fell_back);
        CHECK(fit.labels == plain.labels);
        CHECK(fit.scores == plain.scores);
    }
    CHECK(found > 0);
}

TEST_CASE("fit_predict is deterministic") {
    const auto p = testing::planted(200, 4, 0.0, 8);
    for (auto mode : kModes) {
        const FrugalConfig config{mode, 0.6, small_forest(9, 10)};
        const auto a = fit_predict(config, p.x, p.x);
        const auto b = fit_predict(config, p.x, p.x);
        CHECK(a.labels == b.labels);
        CHECK(a.scores == b.scores);
    }
    CHECK_THROWS_AS(fit_predict(FrugalConfig{}, Matrix(3, 2), Matrix(3, 3)), Error);
}

TEST_CASE("positive affine rescaling keeps the chosen configuration") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Rng rng(seed + 40);
        Matrix x(150, 3);
        for (std::size_t i = 0; i < 150; ++i)
            for (std::size_t j = 0; j < 3; ++j) x(i, j) = static_cast<double>(uniform_index(rng, 30));
        Labels y(150);
        for (std::size_t i = 0; i < 150; ++i) y[i] = x(i, 0) + x(i, 1) + x(i, 2) > 50 ? 1 : 0;
        Matrix scaled = x;
        const double a[] = {2.0, 0.5, 4.0}, b[] = {3.0, -7.0, 100.0};
        for (std::size_t i = 0; i < 150; ++i)
            for (std::size_t j = 0; j < 3; ++j) scaled(i, j) = a[j] * x(i, j) + b[j];

        const auto val = validation_slice(y, 20, seed);
        LabelStore s1(y, val), s2(y, val);
        const auto r1 = tune(x, val, s1, TuneOptions{.params = small_forest(seed, 8)});
        const auto r2 = tune(scaled, val, s2, TuneOptions{.params = small_forest(seed, 8)});
        CHECK(r1.best.mode == r2.best.mode);
        CHECK(r1.best.percentile == r2.best.percentile);
        for (std::size_t k = 0; k < 57; ++k) CHECK(r1.table[k].score == r2.table[k].score);
    }
}
