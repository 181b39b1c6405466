#pragma once

#include "thalparc/execution.hpp"
#include "thalparc/manifold/curve_fit.hpp"
#include "thalparc/manifold/fuzzy_graph.hpp"
#include "thalparc/manifold/knn_graph.hpp"
#include "thalparc/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace thalparc::manifold {

struct LayoutOptions {
    std::size_t epochs = 1000;
    CurveParams curve{};
    double learning_rate = 1.0;
    std::size_t negative_sample_rate = 5;
    /// Bound on every per-coordinate gradient step.
    double clip = 4.0;
    std::uint64_t seed = 0;
    Execution exec = Execution::sequential;
};

/// Attractive coefficient of the log(1 / (1 + a r^(2b))) gradient, for a squared distance.
double attractive_coefficient(double dist_squared, const CurveParams& curve) noexcept;
/// Repulsive coefficient of the negative-sample gradient, for a squared distance.
double repulsive_coefficient(double dist_squared, const CurveParams& curve) noexcept;

/// Stochastic gradient layout. An edge of weight w is sampled on ceil(w * epochs)
/// epochs; each sample pulls both endpoints together and pushes the head
/// away from `negative_sample_rate` random points. The learning rate decays
/// linearly to zero. Throws ErrorCode::non_finite if a coordinate stops
/// being finite (checked at each epoch boundary).
void optimize_layout(Matrix& coords, const FuzzyGraph& graph, const LayoutOptions& options);

namespace kernels {
void layout_serial(Matrix& coords, const FuzzyGraph& graph, const LayoutOptions& options);
/// Hogwild: threads update shared coordinates without synchronisation.
void layout_omp(Matrix& coords, const FuzzyGraph& graph, const LayoutOptions& options);
} // namespace kernels

/// Memberships from one new point to fixed anchor points.
struct AnchorEdges {
    std::vector<std::uint32_t> anchors;
    std::vector<double> weights;
};

/// Moves each row of `moving` against fixed `anchors` with the same
/// attractive / negative-sampling scheme. Points are independent and each
/// uses its own seeded stream, so serial and parallel runs agree exactly.
void refine_points(Matrix& moving, const Matrix& anchors, std::span<const AnchorEdges> edges,
                   const LayoutOptions& options);

} // namespace thalparc::manifold
