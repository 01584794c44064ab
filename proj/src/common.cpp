#include <cmath>
#include <numbers>
#include <string>

#include "frugal/error.hpp"
#include "frugal/matrix.hpp"
#include "frugal/random.hpp"

namespace frugal {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::MissingColumn: return "missing-column";
    case ErrorKind::BadLabel: return "bad-label";
    case ErrorKind::EmptyDataset: return "empty-dataset";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::StratificationInfeasible: return "stratification-infeasible";
    case ErrorKind::BudgetTooSmall: return "budget-too-small";
    case ErrorKind::BudgetViolation: return "budget-violation";
    case ErrorKind::Training: return "training";
    case ErrorKind::ColumnMismatch: return "column-mismatch";
    case ErrorKind::DegenerateClafi: return "degenerate-clafi";
    case ErrorKind::UnknownObjective: return "unknown-objective";
    case ErrorKind::TuningFailed: return "tuning-failed";
    case ErrorKind::Grouping: return "grouping";
    case ErrorKind::SampleTooSmall: return "sample-too-small";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw Error(ErrorKind::InvalidInput, "ragged rows: row " + std::to_string(r));
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto src = row(idx[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < idx.size(); ++j) out(r, j) = (*this)(r, idx[j]);
    return out;
}

void require_finite(const Matrix& m, std::string_view what) {
    for (double v : m.data())
        if (!std::isfinite(v))
            throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite cell");
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double normal01(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace frugal
