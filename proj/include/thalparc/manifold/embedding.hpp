#pragma once

#include "thalparc/execution.hpp"
#include "thalparc/manifold/curve_fit.hpp"
#include "thalparc/manifold/knn_graph.hpp"
#include "thalparc/manifold/layout.hpp"
#include "thalparc/manifold/spectral_init.hpp"
#include "thalparc/matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace thalparc::manifold {

inline constexpr std::size_t kDefaultNeighbors = 2000;

/// 0 requests the scaled default min(2000, max(15, N / 15)); any value is
/// then capped at N - 1.
std::size_t resolve_n_neighbors(std::size_t requested, std::size_t n_points);

struct UmapOptions {
    std::size_t dim = 2;
    std::size_t n_neighbors = 0;
    std::size_t epochs = 1000;
    double min_dist = 0.1;
    double spread = 1.0;
    double learning_rate = 1.0;
    std::size_t negative_sample_rate = 5;
    /// Learning rate of new-point refinement relative to `learning_rate`.
    double transform_rate_scale = 0.25;
    std::uint64_t seed = 0;
    KnnMethod knn = KnnMethod::automatic;
    Execution exec = Execution::sequential;

    bool operator==(const UmapOptions&) const = default;
};

struct FitDiagnostics {
    bool spectral_init = false;
    std::size_t spectral_iterations = 0;
    std::size_t fuzzy_edges = 0;
    std::size_t degenerate_rows = 0;
};

/// A trained embedding: latent coordinates of every training point, the
/// fitted curve, per-point calibration, and the (already normalised)
/// training features needed to place new points.
class EmbeddingModel {
public:
    static EmbeddingModel fit(const Matrix& features, const UmapOptions& options,
                              FitDiagnostics* diagnostics = nullptr);

    /// New points start at the membership-weighted mean of their training
    /// neighbours' coordinates, then are refined for max(1, epochs / 10)
    /// epochs against the fixed training layout.
    Matrix transform(const Matrix& points, Execution exec = Execution::sequential) const;

    /// Just the weighted-mean starting positions.
    Matrix initial_positions(const Matrix& points, std::vector<AnchorEdges>* edges = nullptr) const;

    std::size_t dim() const noexcept { return coords_.cols(); }
    std::size_t size() const noexcept { return coords_.rows(); }
    std::size_t feature_dim() const noexcept { return features_.cols(); }
    std::size_t n_neighbors() const noexcept { return n_neighbors_; }
    std::size_t epochs() const noexcept { return options_.epochs; }
    std::uint64_t seed() const noexcept { return options_.seed; }
    const CurveParams& curve() const noexcept { return curve_; }
    const UmapOptions& options() const noexcept { return options_; }
    const Matrix& coords() const noexcept { return coords_; }
    const Matrix& features() const noexcept { return features_; }
    const std::vector<double>& rho() const noexcept { return rho_; }
    const std::vector<double>& sigma() const noexcept { return sigma_; }

    /// Little-endian binary: magic, header (d, N, D, a, b, seed, epochs,
    /// n_neighbors, ...), coordinates, calibration, training features.
    void write(std::ostream& out) const;
    static EmbeddingModel read(std::istream& in);

    bool operator==(const EmbeddingModel&) const = default;

private:
    UmapOptions options_;
    std::size_t n_neighbors_ = 0;
    CurveParams curve_;
    Matrix coords_;
    Matrix features_;
    std::vector<double> rho_;
    std::vector<double> sigma_;
};

} // namespace thalparc::manifold
