#pragma once

#include <cstdint>
#include <vector>

#include "frugal/matrix.hpp"

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP path; both produce bit-identical results.
namespace frugal::kernels {

enum class Execution { serial, parallel };

/// Condensed upper-triangle Euclidean distances, pair (i, j), i < j, in row-major order.
std::vector<double> pairwise_distances(const Matrix& x, Execution exec = Execution::parallel);

/// Number of unordered pairs with distance strictly below r.
std::uint64_t count_pairs_within(const Matrix& x, double r, Execution exec = Execution::parallel);

/// For each radius (any order) the number of pairs with distance strictly below it.
std::vector<std::uint64_t> count_pairs_within(const Matrix& x, const std::vector<double>& radii,
                                              Execution exec = Execution::parallel);

/// Dense RBF affinity exp(-gamma * |xi - xj|^2) with a zero diagonal.
Matrix rbf_affinity(const Matrix& x, double gamma, Execution exec = Execution::parallel);

/// Symmetrized k-nearest-neighbour connectivity (1 where either row is among the
/// other's k nearest), zero diagonal. Distance ties resolve to the lower index.
Matrix knn_affinity(const Matrix& x, std::size_t k, Execution exec = Execution::parallel);

} // namespace frugal::kernels
