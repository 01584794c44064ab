#include "frugal/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "frugal/cla.hpp"

namespace frugal {

namespace {

bool is_missing(std::string_view s) {
    return s.empty() || s == "NA" || s == "?" || s == "NaN" || s == "nan";
}

std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorKind::MissingColumn, "column not found: " + name);
    return static_cast<std::size_t>(it - header.begin());
}

} // namespace

Dataset::Dataset(Matrix features, std::vector<std::string> feature_names,
                 std::optional<Labels> labels, std::optional<Labels> protected_groups,
                 std::string positive_label_name, std::string privileged_value_name)
    : features_(std::move(features)), names_(std::move(feature_names)), labels_(std::move(labels)),
      protected_(std::move(protected_groups)), positive_name_(std::move(positive_label_name)),
      privileged_name_(std::move(privileged_value_name)) {
    if (features_.rows() == 0) throw Error(ErrorKind::EmptyDataset, "dataset has no rows");
    if (features_.rows() < 2 || features_.cols() < 1)
        throw Error(ErrorKind::InvalidInput, "dataset needs at least 2 rows and 1 feature");
    if (names_.size() != features_.cols())
        throw Error(ErrorKind::InvalidInput, "feature name count does not match columns");
    require_finite(features_, "dataset");
    auto check = [&](const std::optional<Labels>& v, const char* what) {
        if (!v) return;
        if (v->size() != features_.rows())
            throw Error(ErrorKind::InvalidInput, std::string(what) + " length does not match rows");
        for (int x : *v)
            if (x != 0 && x != 1)
                throw Error(ErrorKind::InvalidInput, std::string(what) + " must be binary");
    };
    check(labels_, "labels");
    check(protected_, "protected attribute");
}

const Labels& Dataset::labels() const {
    if (!labels_) throw Error(ErrorKind::InvalidInput, "dataset has no labels");
    return *labels_;
}

const Labels& Dataset::protected_groups() const {
    if (!protected_) throw Error(ErrorKind::InvalidInput, "dataset has no protected attribute");
    return *protected_;
}

Dataset parse_csv(std::string_view text, const Schema& schema) {
    auto records = csv::split(text);
    if (records.empty()) throw Error(ErrorKind::EmptyDataset, "file has no header row");
    const auto header = records.front();
    const std::size_t width = header.size();
    records.erase(records.begin());
    if (records.empty()) throw Error(ErrorKind::EmptyDataset, "file has no data rows");
    for (std::size_t r = 0; r < records.size(); ++r)
        if (records[r].size() != width)
            throw Error(ErrorKind::InvalidInput, "row " + std::to_string(r + 2) + " has " +
                                                     std::to_string(records[r].size()) +
                                                     " cells, header has " + std::to_string(width));

    std::set<std::size_t> skip;
    std::optional<std::size_t> label_col, protected_col;
    if (schema.label_column) {
        label_col = find_column(header, *schema.label_column);
        skip.insert(*label_col);
    }
    if (schema.protected_column) {
        protected_col = find_column(header, *schema.protected_column);
        skip.insert(*protected_col);
    }
    for (const auto& name : schema.ignore) skip.insert(find_column(header, name));

    const std::size_t n = records.size();
    std::optional<Labels> labels;
    if (label_col) {
        std::optional<std::string> negative = schema.negative_value;
        if (!negative) {
            std::set<std::string> others;
            for (const auto& rec : records)
                if (rec[*label_col] != schema.positive_value) others.insert(rec[*label_col]);
            if (others.size() > 1)
                throw Error(ErrorKind::BadLabel, "label column '" + *schema.label_column + "' has " +
                                                     std::to_string(others.size()) +
                                                     " values besides the positive value '" +
                                                     schema.positive_value + "'");
            if (others.size() == 1) negative = *others.begin();
        }
        labels.emplace(n);
        for (std::size_t r = 0; r < n; ++r) {
            const auto& cell = records[r][*label_col];
            if (cell == schema.positive_value)
                (*labels)[r] = 1;
            else if (negative && cell == *negative)
                (*labels)[r] = 0;
            else
                throw Error(ErrorKind::BadLabel, "row " + std::to_string(r + 2) + ": label '" +
                                                     cell + "' matches neither class value");
        }
    }
    std::optional<Labels> groups;
    if (protected_col) {
        groups.emplace(n);
        for (std::size_t r = 0; r < n; ++r) {
            const auto& cell = records[r][*protected_col];
            if (is_missing(cell))
                throw Error(ErrorKind::InvalidInput,
                            "row " + std::to_string(r + 2) + ": missing protected attribute");
            (*groups)[r] = cell == schema.privileged_value ? 1 : 0;
        }
    }

    std::vector<std::vector<double>> columns;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < width; ++c) {
        if (skip.contains(c)) continue;
        bool numeric = true;
        bool observed = false;
        for (const auto& rec : records) {
            if (is_missing(rec[c])) continue;
            observed = true;
            if (!parse_number(rec[c])) {
                numeric = false;
                break;
            }
        }
        if (!observed)
            throw Error(ErrorKind::InvalidInput, "column '" + header[c] + "' has no observed values");
        if (numeric) {
            std::vector<double> col(n);
            std::vector<double> seen;
            std::vector<std::size_t> holes;
            for (std::size_t r = 0; r < n; ++r) {
                if (is_missing(records[r][c])) {
                    holes.push_back(r);
                } else {
                    col[r] = *parse_number(records[r][c]);
                    seen.push_back(col[r]);
                }
            }
            if (!holes.empty()) {
                const double fill = cla::percentile(std::move(seen), 0.5);
                for (auto r : holes) col[r] = fill;
            }
            columns.push_back(std::move(col));
            names.push_back(header[c]);
        } else {
            std::set<std::string> categories;
            for (const auto& rec : records)
                if (!is_missing(rec[c])) categories.insert(rec[c]);
            for (const auto& cat : categories) {
                std::vector<double> col(n, 0.0);
                for (std::size_t r = 0; r < n; ++r) col[r] = records[r][c] == cat ? 1.0 : 0.0;
                columns.push_back(std::move(col));
                names.push_back(header[c] + "=" + cat);
            }
        }
    }
    if (columns.empty()) throw Error(ErrorKind::InvalidInput, "no feature columns");

    Matrix features(n, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t r = 0; r < n; ++r) features(r, j) = columns[j][r];
    return Dataset(std::move(features), std::move(names), std::move(labels), std::move(groups),
                   schema.label_column ? schema.positive_value : "1",
                   schema.protected_column ? schema.privileged_value : "1");
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema);
}

std::size_t validation_size(std::size_t n, double fraction) {
    auto m = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    return std::min(n, std::max<std::size_t>(m, 2));
}

Indices stratified_subset(std::span<const std::size_t> pool, const Labels& labels,
                          std::size_t count, Rng& rng) {
    count = std::min(count, pool.size());
    std::array<Indices, 2> by_class;
    for (auto i : pool) by_class[labels[i] == 1 ? 1 : 0].push_back(i);

    std::array<std::size_t, 2> take{0, 0};
    std::array<double, 2> frac{0, 0};
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
        const double quota = static_cast<double>(count) * static_cast<double>(by_class[c].size()) /
                             static_cast<double>(pool.size());
        take[c] = static_cast<std::size_t>(std::floor(quota));
        frac[c] = quota - std::floor(quota);
        assigned += take[c];
    }
    while (assigned < count) {
        int c = frac[1] > frac[0] ? 1 : 0;
        if (take[c] >= by_class[c].size()) c = 1 - c;
        ++take[c];
        frac[c] = -1.0;
        ++assigned;
    }
    if (count >= 2) {
        for (int c = 0; c < 2; ++c) {
            if (take[c] == 0 && !by_class[c].empty()) {
                ++take[c];
                --take[1 - c];
            }
        }
    }

    Indices out;
    out.reserve(count);
    for (int c = 0; c < 2; ++c) {
        auto& members = by_class[c];
        // Partial Fisher-Yates: the first take[c] slots are a uniform draw.
        for (std::size_t i = 0; i < take[c]; ++i) {
            auto j = i + uniform_index(rng, members.size() - i);
            std::swap(members[i], members[j]);
            out.push_back(members[i]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

PartitionPlan stratified_folds(const Dataset& d, std::size_t bins, std::size_t resamples,
                               double validation_fraction, std::uint64_t seed) {
    const auto& labels = d.labels();
    if (bins < 2) throw Error(ErrorKind::InvalidInput, "need at least 2 bins");
    if (resamples < 1) throw Error(ErrorKind::InvalidInput, "need at least 1 resample");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw Error(ErrorKind::InvalidInput, "validation fraction must lie in (0, 1)");

    std::array<Indices, 2> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < bins)
            throw Error(ErrorKind::StratificationInfeasible,
                        "class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                            " members, fewer than " + std::to_string(bins) + " bins");

    Rng rng(derive_seed({seed, 0x5f0d5ULL}));
    PartitionPlan plan;
    plan.seed = seed;
    plan.test_bins.resize(bins);
    std::size_t k = 0;
    for (int c = 0; c < 2; ++c) {
        shuffle(by_class[c].begin(), by_class[c].end(), rng);
        for (auto i : by_class[c]) plan.test_bins[k++ % bins].push_back(i);
    }
    for (auto& bin : plan.test_bins) std::sort(bin.begin(), bin.end());

    plan.samples.resize(bins);
    std::vector<char> in_bin(d.rows());
    for (std::size_t b = 0; b < bins; ++b) {
        std::fill(in_bin.begin(), in_bin.end(), 0);
        for (auto i : plan.test_bins[b]) in_bin[i] = 1;
        Indices train;
        for (std::size_t i = 0; i < d.rows(); ++i)
            if (!in_bin[i]) train.push_back(i);
        const auto m = validation_size(train.size(), validation_fraction);
        for (std::size_t r = 0; r < resamples; ++r) {
            Rng sample_rng(derive_seed({seed, b, r}));
            TrainSample s;
            s.train = train;
            s.validation = stratified_subset(train, labels, m, sample_rng);
            plan.samples[b].push_back(std::move(s));
        }
    }
    return plan;
}

LabelBudget sample_labels(const Dataset& d, double fraction, std::uint64_t seed) {
    const auto& labels = d.labels();
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw Error(ErrorKind::InvalidInput, "label fraction must lie in (0, 1]");
    const auto count =
        static_cast<std::size_t>(std::llround(fraction * static_cast<double>(d.rows())));
    if (count == 0)
        throw Error(ErrorKind::BudgetTooSmall, "label budget rounds to zero rows");
    Indices pool(d.rows());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    Rng rng(derive_seed({seed, 0x1abe1ULL}));
    LabelBudget budget;
    budget.fraction = fraction;
    budget.seed = seed;
    budget.labeled = stratified_subset(pool, labels, count, rng);
    return budget;
}

} // namespace frugal
