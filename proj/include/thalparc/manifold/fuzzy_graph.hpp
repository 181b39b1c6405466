#pragma once

#include "thalparc/execution.hpp"
#include "thalparc/manifold/knn_graph.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace thalparc::manifold {

inline constexpr double kCalibrationTolerance = 1e-5;
inline constexpr int kCalibrationIterations = 64;
inline constexpr double kMinSigmaScale = 1e-3;

struct SmoothKnn {
    double rho = 0.0;
    double sigma = 0.0;
    /// |sum_j exp(-max(0, d_j - rho) / sigma) - log2(k)| at the returned sigma.
    double residual = 0.0;
    /// The target was unreachable or sigma hit the floor.
    bool degenerate = false;
};

/// Membership strength of one directed edge given its row's calibration.
double membership(double distance, double rho, double sigma) noexcept;

/// rho is the smallest positive distance; sigma is found by bisection so that
/// the memberships of the row sum to log2(k), floored at 1e-3 x mean distance.
SmoothKnn calibrate_smooth_knn(std::span<const double> distances, std::size_t k);

/// Probabilistic t-conorm: a + b - ab.
constexpr double fuzzy_union(double a, double b) noexcept { return a + b - a * b; }

/// Symmetric sparse membership graph in CSR form with per-point calibration.
struct FuzzyGraph {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;  // n + 1 entries
    std::vector<std::uint32_t> col;
    std::vector<double> weight;        // in (0, 1]
    std::vector<double> rho;
    std::vector<double> sigma;
    std::size_t degenerate_rows = 0;

    std::size_t edges() const noexcept { return col.size(); }
    /// 0 when (i, j) is not stored.
    double weight_of(std::size_t i, std::size_t j) const;
};

/// Calibrates each row of the neighbour graph (target log2(n_neighbors)) and
/// combines the directed memberships with `fuzzy_union`.
FuzzyGraph build_fuzzy_graph(const NeighborGraph& graph);

} // namespace thalparc::manifold
