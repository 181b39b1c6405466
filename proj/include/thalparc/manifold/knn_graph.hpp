#pragma once

#include "thalparc/execution.hpp"
#include "thalparc/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace thalparc::manifold {

struct Neighbor {
    std::uint32_t index = 0;
    double distance = 0.0;

    bool operator==(const Neighbor&) const = default;
};

/// Fixed-width neighbour lists: row i holds the `n_neighbors` nearest other
/// points of i, ascending by l2 distance (ties by index). Self is excluded.
class NeighborGraph {
public:
    NeighborGraph() = default;
    NeighborGraph(std::size_t n_points, std::size_t n_neighbors)
        : n_points_(n_points), n_neighbors_(n_neighbors), entries_(n_points * n_neighbors) {}

    std::size_t size() const noexcept { return n_points_; }
    std::size_t n_neighbors() const noexcept { return n_neighbors_; }

    std::span<Neighbor> row(std::size_t i) noexcept {
        return {entries_.data() + i * n_neighbors_, n_neighbors_};
    }
    std::span<const Neighbor> row(std::size_t i) const noexcept {
        return {entries_.data() + i * n_neighbors_, n_neighbors_};
    }

    bool operator==(const NeighborGraph&) const = default;

private:
    std::size_t n_points_ = 0;
    std::size_t n_neighbors_ = 0;
    std::vector<Neighbor> entries_;
};

/// The k nearest rows of `reference` to `query`, ascending (ties by index).
/// `exclude` skips one reference row (used for self-exclusion).
std::vector<Neighbor> nearest_neighbors(const Matrix& reference, std::span<const double> query,
                                        std::size_t k, std::int64_t exclude = -1);

namespace kernels {
NeighborGraph knn_exact_serial(const Matrix& x, std::size_t n_neighbors);
NeighborGraph knn_exact_omp(const Matrix& x, std::size_t n_neighbors);
} // namespace kernels

/// Brute-force graph; throws when n_neighbors >= N.
NeighborGraph knn_graph_exact(const Matrix& x, std::size_t n_neighbors,
                              Execution exec = Execution::sequential);

struct NNDescentOptions {
    std::size_t max_iterations = 30;
    std::size_t max_candidates = 60;
    /// Stop once an iteration changes fewer than delta * N * k entries.
    double delta = 0.001;
};

/// NN-descent: neighbour-of-neighbour refinement from a random start.
/// Falls back to the exact builder when N <= 2 * n_neighbors. Deterministic
/// for a fixed seed.
NeighborGraph knn_graph_approx(const Matrix& x, std::size_t n_neighbors, std::uint64_t seed,
                               const NNDescentOptions& options = {});

enum class KnnMethod { automatic, exact, approximate };

/// `automatic` picks NN-descent only where it beats the quadratic scan:
/// N > 2k and k^2 < N (large k makes each local join more expensive than
/// brute force).
NeighborGraph knn_graph(const Matrix& x, std::size_t n_neighbors, KnnMethod method,
                        std::uint64_t seed, Execution exec);

/// Fraction of exact neighbour indices present in the approximate graph.
double graph_recall(const NeighborGraph& approx, const NeighborGraph& exact);

} // namespace thalparc::manifold
