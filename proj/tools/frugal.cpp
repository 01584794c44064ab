#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "frugal/config.hpp"
#include "frugal/dataset.hpp"
#include "frugal/error.hpp"
#include "frugal/experiment.hpp"
#include "frugal/intrinsic.hpp"
#include "frugal/report.hpp"
#include "frugal/version.hpp"

namespace {

int run_command(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                const std::string& out_dir) {
    auto config = frugal::load_run_config(config_path);
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    const auto report = frugal::run_experiment(config);
    std::size_t failed = 0;
    for (const auto& row : report.rows) failed += row.ok ? 0 : 1;
    for (const auto& file : frugal::emit_report(report, config.output_dir, config.formats))
        std::cout << "wrote " << file.string() << "\n";
    std::cout << report.rows.size() << " runs, " << failed << " failed, config hash "
              << report.config_hash << "\n";
    return 0;
}

int dim_command(const std::string& data, std::size_t radii, const std::string& label,
                const std::vector<std::string>& ignore, const std::string& out) {
    frugal::Schema schema;
    schema.ignore = ignore;
    if (!label.empty()) schema.ignore.push_back(label);
    const auto d = frugal::load_csv(data, schema);
    const auto p = frugal::intrinsic::intrinsic_dimension(d.features(), radii);

    std::ofstream file;
    if (!out.empty()) {
        file.open(out, std::ios::binary);
        if (!file) throw frugal::Error(frugal::ErrorKind::Io, "cannot write " + out);
    }
    std::ostream& os = out.empty() ? std::cout : file;
    os.precision(17);
    os << "# rows: " << d.rows() << "\n# features: " << d.cols() << "\n";
    os << "# normalization: per-column min-max\n";
    os << "# radii: " << radii << " geometric steps from the 1st to the 99th percentile of pairwise distances\n";
    os << "# D: " << p.dimension << "\n# degenerate: " << (p.degenerate ? 1 : 0) << "\n";
    os << "radius,correlation,slope\n";
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        os << p.radii[k] << "," << p.correlation[k] << ",";
        if (k < p.slopes.size() && std::isfinite(p.slopes[k])) os << p.slopes[k];
        os << "\n";
    }
    return 0;
}

int compare_command(const std::vector<std::string>& reports, const std::string& out) {
    frugal::ExperimentReport merged;
    std::set<std::string> hashes;
    for (const auto& path : reports) {
        std::string hash;
        auto rows = frugal::read_runs_csv(path, &hash);
        if (!hash.empty()) hashes.insert(hash);
        for (auto& row : rows) {
            if (std::find(merged.treatments.begin(), merged.treatments.end(), row.treatment) ==
                merged.treatments.end())
                merged.treatments.push_back(row.treatment);
            merged.rows.push_back(std::move(row));
        }
    }
    for (const auto& h : hashes) merged.config_hash += (merged.config_hash.empty() ? "" : "+") + h;
    merged.tool_version = frugal::kToolVersion;
    const auto md = frugal::markdown_report(merged);
    if (out.empty()) {
        std::cout << md;
    } else {
        std::ofstream file(out, std::ios::binary);
        if (!(file << md)) throw frugal::Error(frugal::ErrorKind::Io, "cannot write " + out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Label-frugal defect prediction experiments"};
    app.set_version_flag("--version", std::string(frugal::kToolVersion));
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    run->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--out", out_dir, "Override the output directory");

    auto* dim = app.add_subcommand("dim", "Estimate intrinsic dimensionality of a CSV");
    std::string data, label, dim_out;
    std::size_t radii = 20;
    std::vector<std::string> ignore;
    dim->add_option("--data", data, "CSV file")->required()->check(CLI::ExistingFile);
    dim->add_option("--radii", radii, "Number of radii")->check(CLI::Range(2, 10000));
    dim->add_option("--label", label, "Label column to exclude");
    dim->add_option("--ignore", ignore, "Other columns to exclude");
    dim->add_option("--out", dim_out, "Write the table here instead of stdout");

    auto* compare = app.add_subcommand("compare", "Merge runs.csv files and recompute wins");
    std::vector<std::string> reports;
    std::string compare_out;
    compare->add_option("--reports", reports, "runs.csv files")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", compare_out, "Write markdown here instead of stdout");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return run_command(config_path, seed, out_dir);
        if (*dim) return dim_command(data, radii, label, ignore, dim_out);
        if (*compare) return compare_command(reports, compare_out);
    } catch (const frugal::Error& e) {
        std::cerr << "error (" << frugal::to_string(e.kind()) << "): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
