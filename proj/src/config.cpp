#include "frugal/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "frugal/error.hpp"
#include "frugal/metrics.hpp"
#include "frugal/random.hpp"

namespace frugal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Config, what); }

void allow_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
    if (!obj.is_object()) fail(std::string(where) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail("unknown key '" + key + "' in " + std::string(where));
    }
}

template <class T>
void read(const json& obj, const char* key, T& out, std::string_view where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail("bad value for '" + std::string(key) + "' in " + std::string(where));
    }
}

void read_forest(const json& obj, forest::ForestParams& p, std::string_view where) {
    allow_keys(obj, where, {"tree_count", "max_depth", "min_samples_split", "bootstrap"});
    read(obj, "tree_count", p.tree_count, where);
    read(obj, "min_samples_split", p.min_samples_split, where);
    read(obj, "bootstrap", p.bootstrap, where);
    if (obj.contains("max_depth")) {
        if (obj["max_depth"].is_null()) p.max_depth.reset();
        else {
            std::size_t d = 0;
            read(obj, "max_depth", d, where);
            p.max_depth = d;
        }
    }
}

void read_graph(const json& obj, baselines::GraphParams& p, std::string_view where) {
    allow_keys(obj, where, {"kernel", "gamma", "k", "max_iter", "tol", "alpha"});
    if (obj.contains("kernel")) {
        std::string k;
        read(obj, "kernel", k, where);
        if (k == "rbf") p.kernel = baselines::Kernel::rbf;
        else if (k == "knn") p.kernel = baselines::Kernel::knn;
        else fail("kernel must be rbf or knn in " + std::string(where));
    }
    if (obj.contains("gamma")) {
        if (obj["gamma"].is_null()) p.gamma.reset();
        else {
            double g = 0.0;
            read(obj, "gamma", g, where);
            p.gamma = g;
        }
    }
    read(obj, "k", p.k, where);
    read(obj, "max_iter", p.max_iter, where);
    read(obj, "tol", p.tol, where);
    read(obj, "alpha", p.alpha, where);
}

json graph_json(const baselines::GraphParams& p) {
    return {{"kernel", p.kernel == baselines::Kernel::rbf ? "rbf" : "knn"},
            {"gamma", p.gamma ? json(*p.gamma) : json(nullptr)},
            {"k", p.k},
            {"max_iter", p.max_iter},
            {"tol", p.tol},
            {"alpha", p.alpha}};
}

} // namespace

bool is_treatment(std::string_view name) noexcept {
    return std::find(std::begin(kTreatments), std::end(kTreatments), name) != std::end(kTreatments);
}

json to_json(const forest::ForestParams& p) {
    return {{"tree_count", p.tree_count},
            {"max_depth", p.max_depth ? json(*p.max_depth) : json(nullptr)},
            {"min_samples_split", p.min_samples_split},
            {"bootstrap", p.bootstrap}};
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
    allow_keys(doc, "config", {"dataset", "datasets", "treatments", "label_fraction", "bins",
                               "resamples", "objective", "seed", "output", "params"});
    RunConfig c;
    std::vector<json> sets;
    if (doc.contains("dataset")) sets.push_back(doc["dataset"]);
    if (doc.contains("datasets")) {
        if (!doc["datasets"].is_array()) fail("datasets must be an array");
        for (const auto& d : doc["datasets"]) sets.push_back(d);
    }
    for (const auto& d : sets) {
        allow_keys(d, "dataset", {"name", "path", "label", "positive", "negative", "protected",
                                  "privileged", "ignore"});
        DatasetSpec spec;
        std::string path;
        read(d, "path", path, "dataset");
        if (path.empty()) fail("dataset.path is required");
        spec.path = std::filesystem::path(path).is_absolute() || base_dir.empty() ? std::filesystem::path(path) : base_dir / path;
        spec.name = spec.path.stem().string();
        read(d, "name", spec.name, "dataset");
        std::string label;
        read(d, "label", label, "dataset");
        if (label.empty()) fail("dataset.label is required");
        spec.schema.label_column = label;
        spec.schema.positive_value = "1";
        read(d, "positive", spec.schema.positive_value, "dataset");
        if (d.contains("negative")) {
            std::string neg;
            read(d, "negative", neg, "dataset");
            spec.schema.negative_value = neg;
        }
        if (d.contains("protected")) {
            std::string prot;
            read(d, "protected", prot, "dataset");
            spec.schema.protected_column = prot;
            spec.schema.privileged_value = "1";
            read(d, "privileged", spec.schema.privileged_value, "dataset");
        }
        read(d, "ignore", spec.schema.ignore, "dataset");
        c.datasets.push_back(std::move(spec));
    }
    read(doc, "treatments", c.treatments, "config");
    read(doc, "label_fraction", c.label_fraction, "config");
    read(doc, "bins", c.bins, "config");
    read(doc, "resamples", c.resamples, "config");
    read(doc, "objective", c.objective, "config");
    read(doc, "seed", c.seed, "config");
    if (doc.contains("output")) {
        const auto& o = doc["output"];
        allow_keys(o, "output", {"dir", "formats", "percent"});
        std::string dir;
        read(o, "dir", dir, "output");
        if (!dir.empty())
            c.output_dir = std::filesystem::path(dir).is_absolute() || base_dir.empty() ? std::filesystem::path(dir) : base_dir / dir;
        read(o, "formats", c.formats, "output");
        read(o, "percent", c.percent, "output");
    }
    if (doc.contains("params")) {
        const auto& p = doc["params"];
        allow_keys(p, "params", {"forest", "frugal", "self_train", "co_train", "label_prop",
                                 "label_spread", "supervised_forest"});
        // A shared forest block seeds every forest-based treatment before its own overrides.
        if (p.contains("forest")) {
            forest::ForestParams shared;
            read_forest(p["forest"], shared, "params.forest");
            c.params.frugal.forest = c.params.self_train.forest = c.params.co_train.forest =
                c.params.supervised_forest = shared;
        }
        if (p.contains("frugal")) {
            const auto& f = p["frugal"];
            allow_keys(f, "params.frugal", {"clafi_fixed_median", "forest"});
            read(f, "clafi_fixed_median", c.params.frugal.clafi_fixed_median, "params.frugal");
            if (f.contains("forest")) read_forest(f["forest"], c.params.frugal.forest, "params.frugal.forest");
        }
        if (p.contains("self_train")) {
            const auto& s = p["self_train"];
            allow_keys(s, "params.self_train", {"probability_threshold", "max_iter", "forest"});
            read(s, "probability_threshold", c.params.self_train.probability_threshold, "params.self_train");
            read(s, "max_iter", c.params.self_train.max_iter, "params.self_train");
            if (s.contains("forest"))
                read_forest(s["forest"], c.params.self_train.forest, "params.self_train.forest");
        }
        if (p.contains("co_train")) {
            const auto& s = p["co_train"];
            allow_keys(s, "params.co_train", {"split", "k_per_iter", "max_iter", "forest"});
            if (s.contains("split") && !s["split"].is_null()) {
                std::vector<Indices> views;
                read(s, "split", views, "params.co_train");
                if (views.size() != 2) fail("params.co_train.split must hold exactly two index lists");
                c.params.co_train.split = std::make_pair(views[0], views[1]);
            }
            read(s, "k_per_iter", c.params.co_train.k_per_iter, "params.co_train");
            read(s, "max_iter", c.params.co_train.max_iter, "params.co_train");
            if (s.contains("forest"))
                read_forest(s["forest"], c.params.co_train.forest, "params.co_train.forest");
        }
        if (p.contains("label_prop")) read_graph(p["label_prop"], c.params.label_prop, "params.label_prop");
        if (p.contains("label_spread"))
            read_graph(p["label_spread"], c.params.label_spread, "params.label_spread");
        if (p.contains("supervised_forest")) {
            const auto& s = p["supervised_forest"];
            allow_keys(s, "params.supervised_forest", {"forest"});
            if (s.contains("forest"))
                read_forest(s["forest"], c.params.supervised_forest, "params.supervised_forest.forest");
        }
    }
    validate(c);
    return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + file.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        fail(std::string("config parse error: ") + e.what());
    }
    return parse_run_config(doc, file.parent_path());
}

void validate(const RunConfig& c) {
    if (c.datasets.empty()) fail("at least one dataset is required");
    if (c.treatments.empty()) fail("at least one treatment is required");
    std::set<std::string> seen;
    for (const auto& t : c.treatments) {
        if (!is_treatment(t)) fail("unknown treatment: " + t);
        if (!seen.insert(t).second) fail("duplicate treatment: " + t);
    }
    std::set<std::string> names;
    for (const auto& d : c.datasets)
        if (!names.insert(d.name).second) fail("duplicate dataset name: " + d.name);
    if (!(c.label_fraction > 0.0 && c.label_fraction <= 1.0)) fail("label_fraction must lie in (0, 1]");
    if (c.bins < 2) fail("bins must be >= 2");
    if (c.resamples < 1) fail("resamples must be >= 1");
    if (!tuner::is_objective(c.objective)) fail("unknown objective: " + c.objective);
    for (const auto& f : c.formats)
        if (f != "csv" && f != "markdown") fail("unknown report format: " + f);
    const auto& st = c.params.self_train;
    if (!(st.probability_threshold > 0.5 && st.probability_threshold < 1.0))
        fail("self_train.probability_threshold must lie in (0.5, 1)");
    for (const auto* g : {&c.params.label_prop, &c.params.label_spread}) {
        if (g->gamma && !(*g->gamma > 0.0)) fail("gamma must be > 0");
        if (g->k < 1) fail("k must be >= 1");
        if (!(g->alpha > 0.0 && g->alpha < 1.0)) fail("alpha must lie in (0, 1)");
    }
    for (const auto* f : {&c.params.frugal.forest, &c.params.self_train.forest, &c.params.co_train.forest,
                          &c.params.supervised_forest})
        if (f->tree_count < 1) fail("tree_count must be >= 1");
}

json treatment_params_json(const RunConfig& c, std::string_view treatment) {
    const auto& p = c.params;
    if (treatment == "frugal")
        return {{"clafi_fixed_median", p.frugal.clafi_fixed_median}, {"forest", to_json(p.frugal.forest)},
                {"objective", c.objective}};
    if (treatment == "self_train")
        return {{"probability_threshold", p.self_train.probability_threshold},
                {"max_iter", p.self_train.max_iter},
                {"forest", to_json(p.self_train.forest)}};
    if (treatment == "co_train") {
        json split = nullptr;
        if (p.co_train.split) split = json::array({p.co_train.split->first, p.co_train.split->second});
        return {{"split", split},
                {"k_per_iter", p.co_train.k_per_iter},
                {"max_iter", p.co_train.max_iter},
                {"forest", to_json(p.co_train.forest)}};
    }
    if (treatment == "label_prop") return graph_json(p.label_prop);
    if (treatment == "label_spread") return graph_json(p.label_spread);
    if (treatment == "supervised_forest") return {{"forest", to_json(p.supervised_forest)}};
    throw Error(ErrorKind::Config, "unknown treatment: " + std::string(treatment));
}

json to_json(const RunConfig& c) {
    json datasets = json::array();
    for (const auto& d : c.datasets) {
        json entry = {{"name", d.name},
                      {"path", d.path.generic_string()},
                      {"label", d.schema.label_column.value_or("")},
                      {"positive", d.schema.positive_value},
                      {"negative", d.schema.negative_value ? json(*d.schema.negative_value) : json(nullptr)},
                      {"protected", d.schema.protected_column ? json(*d.schema.protected_column) : json(nullptr)},
                      {"privileged", d.schema.protected_column ? json(d.schema.privileged_value) : json(nullptr)},
                      {"ignore", d.schema.ignore}};
        datasets.push_back(std::move(entry));
    }
    json params = json::object();
    for (auto t : kTreatments) params[std::string(t)] = treatment_params_json(c, t);
    return {{"datasets", datasets},
            {"treatments", c.treatments},
            {"label_fraction", c.label_fraction},
            {"bins", c.bins},
            {"resamples", c.resamples},
            {"objective", c.objective},
            {"seed", c.seed},
            {"output", {{"formats", c.formats}, {"percent", c.percent}}},
            {"params", params}};
}

std::string config_hash(const RunConfig& c) {
    const auto h = fnv1a(to_json(c).dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace frugal
