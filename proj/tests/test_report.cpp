#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "frugal/error.hpp"
#include "frugal/report.hpp"

using namespace frugal;

namespace {

RunRow make_row(const std::string& dataset, const std::string& treatment, std::size_t fold,
                double recall, double far) {
    RunRow r;
    r.dataset = dataset;
    r.treatment = treatment;
    r.fold = fold;
    r.seed = 1234567890123ULL + fold;
    r.train_rows = 160;
    r.test_rows = 40;
    r.budget = 4;
    r.labels_read = 4;
    r.values = {{"recall", recall}, {"far", far}, {"cost", 0.025}, {"ifa", -1.0}, {"aod", -0.25},
                {"di", 1.5}, {"di_deviation", 0.5}};
    r.undefined = {"ifa"};
    r.params = R"({"forest":{"tree_count":5},"note":"a,b"})";
    if (treatment == "frugal") {
        r.mode = tuner::Mode::clafi_ml;
        r.percentile = 0.65;
    }
    return r;
}

ExperimentReport sample_report() {
    ExperimentReport rep;
    rep.treatments = {"frugal", "label_prop"};
    rep.config_hash = "00000000deadbeef";
    rep.tool_version = "test";
    for (const auto* d : {"a", "b"})
        for (std::size_t k = 0; k < 5; ++k) {
            rep.rows.push_back(make_row(d, "frugal", k, 0.9 + 0.01 * static_cast<double>(k), 0.1 / 3.0 * k));
            rep.rows.push_back(make_row(d, "label_prop", k, 0.5 + 0.01 * static_cast<double>(k), 0.2));
        }
    RunRow failed = make_row("a", "label_prop", 9, 0, 0);
    failed.ok = false;
    failed.error = "graph: need a known label for each class";
    failed.values.clear();
    failed.undefined.clear();
    rep.rows.push_back(failed);
    return rep;
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n' ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("csv has a header plus one line per run") {
    const auto rep = sample_report();
    const auto text = runs_csv(rep);
    CHECK(count_lines(text) == rep.rows.size() + 1);
    CHECK(text.rfind("dataset,treatment,fold,resample,seed,", 0) == 0);
}

TEST_CASE("csv round-trips every run field") {
    const auto rep = sample_report();
    std::string hash;
    const auto back = parse_runs_csv(runs_csv(rep), &hash);
    CHECK(hash == rep.config_hash);
    REQUIRE(back.size() == rep.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        const auto& a = rep.rows[i];
        const auto& b = back[i];
        CHECK(a.dataset == b.dataset);
        CHECK(a.treatment == b.treatment);
        CHECK(a.fold == b.fold);
        CHECK(a.seed == b.seed);
        CHECK(a.ok == b.ok);
        CHECK(a.error == b.error);
        CHECK(a.values == b.values);
        CHECK(a.undefined == b.undefined);
        CHECK(a.mode == b.mode);
        CHECK(a.percentile == b.percentile);
        CHECK(a.params == b.params);
        CHECK(a.labels_read == b.labels_read);
    }
}

TEST_CASE("aggregates recompute exactly from the csv") {
    const auto rep = sample_report();
    const auto back = parse_runs_csv(runs_csv(rep));
    const auto t1 = sample_table(rep.rows);
    const auto t2 = sample_table(back);
    CHECK(t1 == t2);
    const auto w1 = analysis::rank_wins(t1);
    const auto w2 = analysis::rank_wins(t2);
    CHECK(w1.wins == w2.wins);
    auto copy = rep;
    copy.rows = back;
    CHECK(markdown_report(copy) == markdown_report(rep));
}

TEST_CASE("sample table skips failures and undefined values and uses magnitudes") {
    const auto t = sample_table(sample_report().rows);
    CHECK(t.at("a").at("recall").at("label_prop").size() == 5);
    CHECK_FALSE(t.at("a").contains("ifa"));
    CHECK(t.at("a").at("aod").at("frugal").front() == 0.25);
    CHECK(t.at("a").at("di").at("frugal").front() == 0.5);
}

TEST_CASE("markdown tables have the expected layout") {
    const auto md = markdown_report(sample_report());
    CHECK(md.find("config hash: 00000000deadbeef") != std::string::npos);
    CHECK(md.find("| dataset | metric | frugal | label_prop |") != std::string::npos);
    // Wins rows are dataset x metric.
    for (const auto* d : {"a", "b"})
        for (const auto* m : {"recall", "far", "cost", "aod", "di"})
            CHECK(md.find(std::string("| ") + d + " | " + m + " |") != std::string::npos);
    CHECK(md.find("| a | recall | 1 | 0 |") != std::string::npos);
    CHECK(md.find("| total | | ") != std::string::npos);
    CHECK(md.find("**0.920**") != std::string::npos);
    CHECK(md.find("CLAFI_ML C=0.65") != std::string::npos);
    CHECK(md.find("## Failed runs") != std::string::npos);
}

TEST_CASE("percent display scales ratio metrics") {
    auto rep = sample_report();
    rep.percent = true;
    CHECK(markdown_report(rep).find("**92.0**") != std::string::npos);
}

TEST_CASE("emit_report writes the requested files") {
    const auto dir = std::filesystem::temp_directory_path() / "frugal_report_test";
    std::filesystem::remove_all(dir);
    const auto rep = sample_report();
    const auto files = emit_report(rep, dir, {"csv", "markdown"});
    REQUIRE(files.size() == 2);
    std::ifstream in(dir / "runs.csv");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == runs_csv(rep));
    CHECK(std::filesystem::exists(dir / "report.md"));
    CHECK(read_runs_csv(dir / "runs.csv").size() == rep.rows.size());

    std::ofstream(dir / "blocker") << "x";
    CHECK_THROWS_AS(emit_report(rep, dir / "blocker" / "sub", {"csv"}), Error);
    CHECK_THROWS_AS(emit_report(ExperimentReport{}, dir, {"csv"}), Error);
}

TEST_CASE("malformed csv is rejected") {
    CHECK_THROWS_AS(parse_runs_csv(""), Error);
    CHECK_THROWS_AS(parse_runs_csv("dataset,treatment\na,b\n"), Error);
}
