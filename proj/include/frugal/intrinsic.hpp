#pragma once

#include <vector>

#include "frugal/kernels.hpp"
#include "frugal/matrix.hpp"

namespace frugal::intrinsic {

/// Per-column min-max scaling to [0, 1]; constant columns become 0.
Matrix minmax_normalize(const Matrix& x);

/// Fraction of unordered pairs at Euclidean distance strictly below r. No normalization is applied.
double correlation_integral(const Matrix& x, double r,
                            kernels::Execution exec = kernels::Execution::parallel);

struct DimProfile {
    std::vector<double> radii;
    std::vector<double> correlation;
    /// slopes[k] between radii k and k+1; NaN when either C(r) is zero.
    std::vector<double> slopes;
    double dimension = 0.0;
    bool degenerate = false;
};

/// Max slope of ln C(r) against ln r on a geometric radius grid spanning the
/// 1st to 99th percentile of pairwise distances after min-max normalization.
DimProfile intrinsic_dimension(const Matrix& x, std::size_t radius_count = 20,
                               kernels::Execution exec = kernels::Execution::parallel);

} // namespace frugal::intrinsic
