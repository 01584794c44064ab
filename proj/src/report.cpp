#include "frugal/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "frugal/error.hpp"
#include "frugal/metrics.hpp"

namespace frugal {

namespace {

const std::vector<std::string> kValueColumns = {"recall", "far", "precision", "f1", "accuracy",
                                                "auc",    "ifa", "cost",      "aod", "eod",
                                                "spd",    "di",  "di_deviation"};

std::string exact(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorKind::InvalidInput, "bad number in runs csv: " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorKind::InvalidInput, "bad integer in runs csv: " + s);
    return v;
}

std::string join(const std::set<std::string>& items, char sep) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += sep;
        out += s;
    }
    return out;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::vector<std::string> csv_columns() {
    std::vector<std::string> cols = {"dataset", "treatment",  "fold",   "resample",
                                     "seed",    "status",     "error",  "train_rows",
                                     "test_rows", "budget",   "labels_read"};
    cols.insert(cols.end(), kValueColumns.begin(), kValueColumns.end());
    for (const char* c : {"undefined", "mode", "percentile", "fell_back", "config_hash",
                          "tool_version", "params"})
        cols.emplace_back(c);
    return cols;
}

std::string runs_csv(const ExperimentReport& report) {
    std::ostringstream out;
    const auto cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& row : report.rows) {
        std::vector<std::string> cells = {csv::escape(row.dataset),
                                          row.treatment,
                                          std::to_string(row.fold),
                                          std::to_string(row.resample),
                                          std::to_string(row.seed),
                                          row.ok ? "ok" : "error",
                                          csv::escape(row.error),
                                          std::to_string(row.train_rows),
                                          std::to_string(row.test_rows),
                                          std::to_string(row.budget),
                                          std::to_string(row.labels_read)};
        for (const auto& m : kValueColumns) {
            auto it = row.values.find(m);
            cells.push_back(it == row.values.end() ? "" : exact(it->second));
        }
        cells.push_back(join(row.undefined, ';'));
        cells.push_back(row.mode ? std::string(tuner::to_string(*row.mode)) : "");
        cells.push_back(row.percentile ? exact(*row.percentile) : "");
        cells.push_back(row.mode ? (row.fell_back ? "1" : "0") : "");
        cells.push_back(report.config_hash);
        cells.push_back(report.tool_version);
        cells.push_back(csv::escape(row.params));
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
    return out.str();
}

std::vector<RunRow> parse_runs_csv(std::string_view text, std::string* config_hash) {
    auto records = csv::split(text);
    if (records.empty()) throw Error(ErrorKind::InvalidInput, "runs csv is empty");
    const auto& header = records.front();
    std::map<std::string, std::size_t> at;
    for (std::size_t i = 0; i < header.size(); ++i) at[header[i]] = i;
    for (const auto& c : csv_columns())
        if (!at.contains(c)) throw Error(ErrorKind::MissingColumn, "runs csv lacks column " + c);

    std::vector<RunRow> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size())
            throw Error(ErrorKind::InvalidInput, "runs csv row " + std::to_string(r + 1) + " is ragged");
        const auto cell = [&](const char* name) -> const std::string& { return rec[at.at(name)]; };
        RunRow row;
        row.dataset = cell("dataset");
        row.treatment = cell("treatment");
        row.fold = parse_u64(cell("fold"));
        row.resample = parse_u64(cell("resample"));
        row.seed = parse_u64(cell("seed"));
        row.ok = cell("status") == "ok";
        row.error = cell("error");
        row.train_rows = parse_u64(cell("train_rows"));
        row.test_rows = parse_u64(cell("test_rows"));
        row.budget = parse_u64(cell("budget"));
        row.labels_read = parse_u64(cell("labels_read"));
        for (const auto& m : kValueColumns) {
            const auto& v = rec[at.at(m)];
            if (!v.empty()) row.values[m] = parse_double(v);
        }
        std::stringstream undefined(cell("undefined"));
        for (std::string item; std::getline(undefined, item, ';');)
            if (!item.empty()) row.undefined.insert(item);
        if (!cell("mode").empty()) row.mode = tuner::parse_mode(cell("mode"));
        if (!cell("percentile").empty()) row.percentile = parse_double(cell("percentile"));
        row.fell_back = cell("fell_back") == "1";
        row.params = cell("params");
        if (config_hash && config_hash->empty()) *config_hash = cell("config_hash");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RunRow> read_runs_csv(const std::filesystem::path& file, std::string* config_hash) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_runs_csv(buf.str(), config_hash);
}

analysis::SampleTable sample_table(const std::vector<RunRow>& rows) {
    analysis::SampleTable table;
    for (const auto& row : rows) {
        if (!row.ok) continue;
        for (auto name : metrics::kMetricNames) {
            const std::string metric(name);
            const std::string source = metric == "di" ? "di_deviation" : metric;
            auto it = row.values.find(source);
            if (it == row.values.end() || row.undefined.contains(source) || row.undefined.contains(metric))
                continue;
            double v = it->second;
            if (metric == "aod" || metric == "eod" || metric == "spd") v = std::abs(v);
            table[row.dataset][metric][row.treatment].push_back(v);
        }
    }
    return table;
}

std::vector<std::string> report_metrics(const std::vector<RunRow>& rows) {
    std::set<std::string> present;
    for (const auto& row : rows)
        for (const auto& [k, v] : row.values) present.insert(k == "di_deviation" ? "di" : k);
    std::vector<std::string> out;
    for (auto name : metrics::kMetricNames)
        if (present.contains(std::string(name))) out.emplace_back(name);
    return out;
}

std::string markdown_report(const ExperimentReport& report) {
    std::ostringstream md;
    const auto table = sample_table(report.rows);
    const auto cmp = analysis::rank_wins(table);
    std::vector<std::string> treatments = report.treatments;
    for (const auto& t : cmp.treatments)
        if (std::find(treatments.begin(), treatments.end(), t) == treatments.end()) treatments.push_back(t);
    std::set<std::string> dataset_set;
    for (const auto& row : report.rows) dataset_set.insert(row.dataset);
    const std::vector<std::string> datasets(dataset_set.begin(), dataset_set.end());
    const auto metric_names = report_metrics(report.rows);
    std::size_t failed = 0;
    for (const auto& row : report.rows) failed += row.ok ? 0 : 1;

    md << "# Experiment report\n\n";
    md << "- tool version: " << report.tool_version << "\n";
    md << "- config hash: " << report.config_hash << "\n";
    md << "- runs: " << report.rows.size() << " (" << failed << " failed)\n";
    md << "- effect-size threshold: Cohen's d " << analysis::kEffectThreshold
       << "; bold cells share the best group\n";
    md << "- seed policy: run seed = hash(master seed, dataset, fold, resample, treatment)\n";
    md << "- magnitudes: |aod|, |eod|, |spd| and |1 - di| (lower is better)\n";
    if (report.percent) md << "- ratio metrics shown x100\n";
    md << "\n";

    md << "## Medians\n\n";
    for (const auto& metric : metric_names) {
        const bool higher = metrics::direction(metric) == metrics::Direction::higher_better;
        md << "### " << metric << (higher ? " (higher is better)" : " (lower is better)") << "\n\n";
        md << "| dataset |";
        for (const auto& t : treatments) md << " " << t << " |";
        md << "\n|---|";
        for (std::size_t i = 0; i < treatments.size(); ++i) md << "---|";
        md << "\n";
        for (const auto& d : datasets) {
            md << "| " << d << " |";
            const analysis::MetricRanking* ranking = nullptr;
            if (auto it = cmp.rankings.find(d); it != cmp.rankings.end())
                if (auto jt = it->second.find(metric); jt != it->second.end()) ranking = &jt->second;
            for (const auto& t : treatments) {
                const analysis::TreatmentSummary* s = nullptr;
                if (ranking)
                    for (const auto& x : ranking->treatments)
                        if (x.treatment == t) s = &x;
                if (s == nullptr || s->samples == 0) {
                    md << " n/a |";
                    continue;
                }
                const bool scaled = report.percent && metric != "ifa";
                const std::string v = fixed(scaled ? s->median * 100.0 : s->median,
                                            metric == "ifa" || scaled ? 1 : 3);
                md << " " << (s->best_group ? "**" + v + "**" : v) << " |";
            }
            md << "\n";
        }
        md << "\n";
    }

    md << "## Wins\n\n| dataset | metric |";
    for (const auto& t : treatments) md << " " << t << " |";
    md << "\n|---|---|";
    for (std::size_t i = 0; i < treatments.size(); ++i) md << "---|";
    md << "\n";
    std::map<std::string, std::size_t> totals;
    for (const auto& d : datasets) {
        for (const auto& metric : metric_names) {
            md << "| " << d << " | " << metric << " |";
            for (const auto& t : treatments) {
                int win = 0;
                if (auto it = cmp.rankings.find(d); it != cmp.rankings.end())
                    if (auto jt = it->second.find(metric); jt != it->second.end())
                        for (const auto& x : jt->second.treatments)
                            if (x.treatment == t && x.best_group) win = 1;
                totals[t] += static_cast<std::size_t>(win);
                md << " " << win << " |";
            }
            md << "\n";
        }
    }
    md << "| total | |";
    for (const auto& t : treatments) md << " " << totals[t] << " |";
    md << "\n\n";

    std::map<std::string, std::map<std::string, std::size_t>> chosen;
    for (const auto& row : report.rows)
        if (row.ok && row.mode && row.percentile)
            ++chosen[row.dataset][std::string(tuner::to_string(*row.mode)) + " C=" +
                                  fixed(*row.percentile, 2) + (row.fell_back ? " (fallback)" : "")];
    if (!chosen.empty()) {
        md << "## FRUGAL configurations\n\n| dataset | configuration | runs |\n|---|---|---|\n";
        for (const auto& [d, counts] : chosen)
            for (const auto& [cfg, n] : counts) md << "| " << d << " | " << cfg << " | " << n << " |\n";
        md << "\n";
    }

    if (failed > 0) {
        md << "## Failed runs\n\n| dataset | treatment | fold | resample | error |\n|---|---|---|---|---|\n";
        for (const auto& row : report.rows)
            if (!row.ok)
                md << "| " << row.dataset << " | " << row.treatment << " | " << row.fold << " | "
                   << row.resample << " | " << row.error << " |\n";
        md << "\n";
    }

    if (!report.config.is_null()) {
        md << "## Parameters\n\n```json\n" << report.config.dump(2) << "\n```\n";
    }
    return md.str();
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats) {
    if (report.rows.empty()) throw Error(ErrorKind::InvalidInput, "report has no runs");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    const auto write = [&](const std::filesystem::path& file, const std::string& body) {
        std::ofstream out(file, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
        out << body;
        if (!out) throw Error(ErrorKind::Io, "write failed: " + file.string());
        written.push_back(file);
    };
    for (const auto& f : formats) {
        if (f == "csv") write(dir / "runs.csv", runs_csv(report));
        else if (f == "markdown") write(dir / "report.md", markdown_report(report));
        else throw Error(ErrorKind::InvalidInput, "unknown report format: " + f);
    }
    return written;
}

} // namespace frugal
