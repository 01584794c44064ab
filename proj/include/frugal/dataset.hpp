#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "frugal/matrix.hpp"
#include "frugal/random.hpp"

namespace frugal {

/// Column roles for load_csv.
struct Schema {
    std::optional<std::string> label_column;
    std::string positive_value;
    /// When empty, the label column must hold exactly one value besides the positive one.
    std::optional<std::string> negative_value;
    std::optional<std::string> protected_column;
    std::string privileged_value;
    std::vector<std::string> ignore;
};

/// Immutable numeric dataset. Labels and protected groups are optional.
class Dataset {
public:
    Dataset(Matrix features, std::vector<std::string> feature_names,
            std::optional<Labels> labels = std::nullopt,
            std::optional<Labels> protected_groups = std::nullopt,
            std::string positive_label_name = "1", std::string privileged_value_name = "1");

    const Matrix& features() const noexcept { return features_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    bool has_labels() const noexcept { return labels_.has_value(); }
    const Labels& labels() const;
    bool has_protected() const noexcept { return protected_.has_value(); }
    const Labels& protected_groups() const;
    const std::string& positive_label_name() const noexcept { return positive_name_; }
    const std::string& privileged_value_name() const noexcept { return privileged_name_; }

    std::size_t rows() const noexcept { return features_.rows(); }
    std::size_t cols() const noexcept { return features_.cols(); }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    Matrix features_;
    std::vector<std::string> names_;
    std::optional<Labels> labels_;
    std::optional<Labels> protected_;
    std::string positive_name_;
    std::string privileged_name_;
};

/// Reads a comma-separated file with a header row. Non-numeric feature columns
/// are one-hot encoded (categories sorted lexicographically, named "col=value");
/// missing numeric cells ("", "NA", "?") take the column median.
Dataset load_csv(const std::filesystem::path& path, const Schema& schema);

/// Parses CSV text already in memory; same rules as load_csv.
Dataset parse_csv(std::string_view text, const Schema& schema);

struct TrainSample {
    /// Row indices into the dataset; a stratified shuffle of the complement of the test bin.
    Indices train;
    /// Labeled slice of `train` (dataset row indices).
    Indices validation;
};

struct PartitionPlan {
    std::vector<Indices> test_bins;
    /// samples[bin][resample]
    std::vector<std::vector<TrainSample>> samples;
    std::uint64_t seed = 0;
};

/// Number of validation rows for a train sample of size n: round(fraction * n), at least 2.
std::size_t validation_size(std::size_t n, double fraction);

PartitionPlan stratified_folds(const Dataset& d, std::size_t bins = 5, std::size_t resamples = 5,
                               double validation_fraction = 0.025, std::uint64_t seed = 0);

struct LabelBudget {
    double fraction = 0.0;
    Indices labeled;
    std::uint64_t seed = 0;
};

LabelBudget sample_labels(const Dataset& d, double fraction, std::uint64_t seed);

/// Draws `count` rows from `pool` stratified by `labels[pool[i]]`, keeping at
/// least one row per present class when count >= 2. Result is sorted.
Indices stratified_subset(std::span<const std::size_t> pool, const Labels& labels,
                          std::size_t count, Rng& rng);

} // namespace frugal
