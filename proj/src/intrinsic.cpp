#include "frugal/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frugal/cla.hpp"
#include "frugal/error.hpp"

namespace frugal::intrinsic {

Matrix minmax_normalize(const Matrix& x) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
        const double span = hi - lo;
        for (std::size_t i = 0; i < x.rows(); ++i)
            out(i, j) = span > 0.0 ? (x(i, j) - lo) / span : 0.0;
    }
    return out;
}

double correlation_integral(const Matrix& x, double r, kernels::Execution exec) {
    if (x.rows() < 2) throw Error(ErrorKind::SampleTooSmall, "correlation integral needs n >= 2");
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
    const double n = static_cast<double>(x.rows());
    const auto within = static_cast<double>(kernels::count_pairs_within(x, r, exec));
    return within * 2.0 / (n * (n - 1.0));
}

DimProfile intrinsic_dimension(const Matrix& x, std::size_t radius_count, kernels::Execution exec) {
    if (x.rows() < 10) throw Error(ErrorKind::SampleTooSmall, "intrinsic dimension needs n >= 10");
    if (radius_count < 2) throw Error(ErrorKind::InvalidInput, "need at least 2 radii");
    require_finite(x, "intrinsic_dimension");

    DimProfile profile;
    const Matrix z = minmax_normalize(x);
    auto distances = kernels::pairwise_distances(z, exec);
    const double largest = *std::max_element(distances.begin(), distances.end());
    if (largest == 0.0) {
        profile.degenerate = true;
        return profile;
    }
    double smallest_positive = largest;
    for (double d : distances)
        if (d > 0.0) smallest_positive = std::min(smallest_positive, d);
    const double lo = std::max(cla::percentile(distances, 0.01), smallest_positive);
    const double hi = cla::percentile(std::move(distances), 0.99);
    if (!(hi > lo)) {
        profile.degenerate = true;
        return profile;
    }

    const double ratio = std::log(hi / lo);
    for (std::size_t k = 0; k < radius_count; ++k)
        profile.radii.push_back(
            k + 1 == radius_count
                ? hi
                : lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(radius_count - 1)));

    const auto counts = kernels::count_pairs_within(z, profile.radii, exec);
    const double n = static_cast<double>(z.rows());
    const double pairs = n * (n - 1.0) / 2.0;
    for (auto c : counts) profile.correlation.push_back(static_cast<double>(c) / pairs);

    profile.dimension = 0.0;
    bool any = false;
    for (std::size_t k = 0; k + 1 < radius_count; ++k) {
        const double c0 = profile.correlation[k];
        const double c1 = profile.correlation[k + 1];
        if (c0 <= 0.0 || c1 <= 0.0) {
            profile.slopes.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double slope = (std::log(c1) - std::log(c0)) /
                             (std::log(profile.radii[k + 1]) - std::log(profile.radii[k]));
        profile.slopes.push_back(slope);
        if (!any || slope > profile.dimension) profile.dimension = slope;
        any = true;
    }
    if (!any) {
        profile.degenerate = true;
        profile.dimension = 0.0;
    }
    return profile;
}

} // namespace frugal::intrinsic
