#include "frugal/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "frugal/baselines.hpp"
#include "frugal/error.hpp"
#include "frugal/label_store.hpp"
#include "frugal/metrics.hpp"
#include "frugal/random.hpp"
#include "frugal/tuner.hpp"
#include "frugal/version.hpp"

namespace frugal {

std::uint64_t run_seed(std::uint64_t master, std::string_view dataset, std::size_t fold,
                       std::size_t resample, std::string_view treatment) noexcept {
    return derive_seed({master, fnv1a(dataset), fold, resample, fnv1a(treatment)});
}

namespace {

bool is_fairness(std::string_view m) { return m == "aod" || m == "eod" || m == "spd" || m == "di"; }

struct Outcome {
    Labels labels;
    std::vector<double> scores;
};

void record_metrics(RunRow& row, const Labels& truth, const Outcome& out,
                    const Labels* groups) {
    const auto set = [&](const char* name, metrics::Ratio r) {
        row.values[name] = r.value;
        if (r.undefined) row.undefined.insert(name);
    };
    const auto cls = metrics::classification_metrics(metrics::confusion(truth, out.labels));
    set("recall", cls.recall);
    set("far", cls.far);
    set("precision", cls.precision);
    set("f1", cls.f1);
    set("accuracy", cls.accuracy);
    set("auc", metrics::auc(truth, out.scores));
    const long ifa = metrics::ifa(truth, out.scores, out.labels);
    row.values["ifa"] = static_cast<double>(ifa);
    if (ifa < 0) row.undefined.insert("ifa");
    row.values["cost"] = metrics::labeling_cost(row.labels_read, row.train_rows);
    if (groups) {
        try {
            const auto f = metrics::fairness_metrics(truth, out.labels, *groups);
            set("aod", f.aod);
            set("eod", f.eod);
            set("spd", f.spd);
            set("di", f.di_ratio);
            set("di_deviation", f.di_deviation);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Grouping) throw;
            for (auto m : {"aod", "eod", "spd", "di", "di_deviation"}) {
                row.values[m] = 0.0;
                row.undefined.insert(m);
            }
        }
    }
}

Outcome run_treatment(RunRow& row, const std::string& treatment, const RunConfig& config,
                      const Matrix& train, const Matrix& test, const Indices& budget,
                      LabelStore& store, const std::optional<Labels>& train_groups) {
    const auto& p = config.params;
    Indices others;
    {
        std::vector<char> labeled(train.rows(), 0);
        for (auto i : budget) labeled[i] = 1;
        for (std::size_t i = 0; i < train.rows(); ++i)
            if (!labeled[i]) others.push_back(i);
    }

    if (treatment == "frugal") {
        tuner::TuneOptions opts;
        opts.objective = config.objective;
        opts.params = p.frugal;
        opts.params.forest.seed = row.seed;
        if (is_fairness(config.objective) && train_groups)
            opts.validation_protected = gather<int>(*train_groups, budget);
        auto tuned = tuner::tune(train, budget, store, opts);
        auto fit = tuner::fit_predict(tuned.best, train, test);
        row.mode = tuned.best.mode;
        row.percentile = tuned.best.percentile;
        row.fell_back = fit.fell_back;
        return {std::move(fit.labels), std::move(fit.scores)};
    }
    if (treatment == "self_train" || treatment == "co_train") {
        const Labels y = store.read(budget);
        const Matrix labeled = train.select_rows(budget);
        const Matrix unlabeled = train.select_rows(others);
        forest::Prediction pred;
        if (treatment == "self_train") {
            auto params = p.self_train;
            params.forest.seed = row.seed;
            pred = baselines::self_train(labeled, y, unlabeled, params).model.predict(test);
        } else {
            auto params = p.co_train;
            params.forest.seed = row.seed;
            pred = baselines::co_train(labeled, y, unlabeled, params).model.predict(test);
        }
        return {std::move(pred.labels), std::move(pred.scores)};
    }
    if (treatment == "label_prop" || treatment == "label_spread") {
        const Labels y = store.read(budget);
        Matrix graph(train.rows() + test.rows(), train.cols());
        for (std::size_t i = 0; i < train.rows(); ++i)
            std::copy(train.row(i).begin(), train.row(i).end(), graph.row(i).begin());
        for (std::size_t i = 0; i < test.rows(); ++i)
            std::copy(test.row(i).begin(), test.row(i).end(), graph.row(train.rows() + i).begin());
        Labels partial(graph.rows(), baselines::kUnknown);
        for (std::size_t k = 0; k < budget.size(); ++k) partial[budget[k]] = y[k];
        auto params = treatment == "label_prop" ? p.label_prop : p.label_spread;
        params.seed = row.seed;
        const auto result = treatment == "label_prop" ? baselines::label_propagation(graph, partial, params)
                                                      : baselines::label_spreading(graph, partial, params);
        Outcome out;
        for (std::size_t i = 0; i < test.rows(); ++i) {
            out.labels.push_back(result.labels[train.rows() + i]);
            out.scores.push_back(result.distribution(train.rows() + i, 1));
        }
        return out;
    }
    if (treatment == "supervised_forest") {
        const Labels y = store.read(store.budget());
        auto params = p.supervised_forest;
        params.seed = row.seed;
        auto pred = forest::train_forest(train, y, params).predict(test);
        return {std::move(pred.labels), std::move(pred.scores)};
    }
    throw Error(ErrorKind::Config, "unknown treatment: " + treatment);
}

RunRow base_row(const std::string& name, const std::string& treatment, std::size_t fold,
                std::size_t resample, const RunConfig& config) {
    RunRow row;
    row.dataset = name;
    row.treatment = treatment;
    row.fold = fold;
    row.resample = resample;
    row.seed = run_seed(config.seed, name, fold, resample, treatment);
    auto params = treatment_params_json(config, treatment);
    params["label_fraction"] = config.label_fraction;
    params["bins"] = config.bins;
    params["resamples"] = config.resamples;
    row.params = params.dump();
    return row;
}

std::vector<RunRow> failed_rows(const std::string& name, const RunConfig& config,
                                const std::string& error) {
    std::vector<RunRow> rows;
    for (std::size_t b = 0; b < config.bins; ++b)
        for (std::size_t r = 0; r < config.resamples; ++r)
            for (const auto& t : config.treatments) {
                auto row = base_row(name, t, b, r, config);
                row.ok = false;
                row.error = error;
                rows.push_back(std::move(row));
            }
    return rows;
}

} // namespace

RunRow run_once(const Dataset& data, const std::string& name, const RunConfig& config,
                const PartitionPlan& plan, std::size_t bin, std::size_t resample,
                const std::string& treatment, const Labels* evaluation_labels) {
    const auto& labels = data.labels();
    const Labels& scored = evaluation_labels ? *evaluation_labels : labels;
    if (scored.size() != labels.size())
        throw Error(ErrorKind::InvalidInput, "evaluation labels do not match the dataset");
    RunRow row = base_row(name, treatment, bin, resample, config);
    try {
        const auto& sample = plan.samples.at(bin).at(resample);
        const auto& test_idx = plan.test_bins.at(bin);
        const Matrix train = data.features().select_rows(sample.train);
        const Matrix test = data.features().select_rows(test_idx);
        row.train_rows = train.rows();
        row.test_rows = test.rows();

        // Budget indices are positions within the train sample.
        Indices budget;
        {
            std::size_t pos = 0;
            for (auto v : sample.validation) {
                while (sample.train[pos] != v) ++pos;
                budget.push_back(pos);
            }
        }
        if (treatment == "supervised_forest") {
            budget.resize(train.rows());
            for (std::size_t i = 0; i < budget.size(); ++i) budget[i] = i;
        }
        row.budget = budget.size();
        LabelStore store(gather<int>(labels, sample.train), budget);

        std::optional<Labels> train_groups, test_groups;
        if (data.has_protected()) {
            train_groups = gather<int>(data.protected_groups(), sample.train);
            test_groups = gather<int>(data.protected_groups(), test_idx);
        }
        const auto outcome =
            run_treatment(row, treatment, config, train, test, budget, store, train_groups);
        row.labels_read = store.access_count();
        if (row.labels_read > row.budget)
            throw Error(ErrorKind::BudgetViolation, "treatment read more labels than its budget");
        record_metrics(row, gather<int>(scored, test_idx), outcome,
                       test_groups ? &*test_groups : nullptr);
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
        row.values.clear();
        row.undefined.clear();
    }
    return row;
}

std::vector<RunRow> run_dataset(const Dataset& data, const std::string& name, const RunConfig& config,
                                const Labels* evaluation_labels) {
    validate(config);
    PartitionPlan plan;
    try {
        plan = stratified_folds(data, config.bins, config.resamples, config.label_fraction,
                                derive_seed(config.seed, "partition:" + name));
    } catch (const std::exception& e) {
        return failed_rows(name, config, e.what());
    }

    const std::size_t per_sample = config.treatments.size();
    const std::size_t tasks = config.bins * config.resamples * per_sample;
    std::vector<RunRow> rows(tasks);
    const auto count = static_cast<std::ptrdiff_t>(tasks);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t task = 0; task < count; ++task) {
        const auto k = static_cast<std::size_t>(task);
        const std::size_t b = k / (config.resamples * per_sample);
        const std::size_t r = (k / per_sample) % config.resamples;
        rows[k] = run_once(data, name, config, plan, b, r, config.treatments[k % per_sample],
                           evaluation_labels);
    }
    return rows;
}

ExperimentReport run_experiment(const RunConfig& config) {
    validate(config);
    ExperimentReport report;
    report.treatments = config.treatments;
    report.config_hash = config_hash(config);
    report.tool_version = kToolVersion;
    report.config = to_json(config);
    report.percent = config.percent;
    for (const auto& spec : config.datasets) {
        std::vector<RunRow> rows;
        try {
            const Dataset data = load_csv(spec.path, spec.schema);
            rows = run_dataset(data, spec.name, config);
        } catch (const std::exception& e) {
            rows = failed_rows(spec.name, config, e.what());
        }
        std::move(rows.begin(), rows.end(), std::back_inserter(report.rows));
    }
    return report;
}

} // namespace frugal
