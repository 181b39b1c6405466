#pragma once

#include "thalparc/execution.hpp"
#include "thalparc/feature_store.hpp"
#include "thalparc/matrix.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace thalparc::synth {

struct SynthSpec {
    std::size_t n_subjects = 25;
    std::size_t voxels_per_subject = 200;
    std::size_t n_clusters = 13;
    /// Groups written to the table; Coord is implied by (i, j, k).
    FeatureGroupSpec groups{FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti};
    /// Mean inter-centroid distance over the informative columns, in units
    /// of the per-column noise sigma.
    double separation = 8.0;
    double overlap_fraction = 0.0;
    double unlabeled_fraction = 0.0;
    /// Conn6/Conn98 carry cluster signal only when set.
    bool informative_connectivity = false;
    std::uint64_t seed = 0;

    /// key=value text, one per line; '#' starts a comment.
    static SynthSpec parse(std::string_view text);
    std::string to_string() const;
};

struct SynthData {
    Dataset dataset;
    /// Spatial cluster of every voxel (also for unlabelled ones), as an index
    /// into kScoredNuclei.
    std::vector<std::size_t> cluster;
};

/// Gaussian clusters in feature space over Voronoi-cell label blobs that
/// share one template layout across subjects (with per-subject jitter), so
/// recentred coordinates carry signal. Exactly round(overlap * N) voxels
/// get a second label (their next-nearest cell) and round(unlabeled * N)
/// get none. Deterministic per seed.
SynthData generate(const SynthSpec& spec);

/// Isotropic Gaussian blobs: `per_blob` points around each of `centers`
/// random centres, used by embedding-quality checks.
struct Blobs {
    Matrix points;
    std::vector<int> labels;
};
Blobs gaussian_blobs(std::size_t n_blobs, std::size_t per_blob, std::size_t dim, double center_spread,
                     std::uint64_t seed);

namespace kernels {
double trustworthiness_serial(const Matrix& high, const Matrix& low, std::size_t k);
double trustworthiness_omp(const Matrix& high, const Matrix& low, std::size_t k);
double silhouette_serial(const Matrix& y, std::span<const int> labels);
double silhouette_omp(const Matrix& y, std::span<const int> labels);
} // namespace kernels

/// 1 - 2 / (n k (2n - 3k - 1)) * sum over latent k-neighbours j of i of
/// max(0, r(i, j) - k), r being the ambient rank. Needs k < N and
/// 2n - 3k - 1 > 0.
double trustworthiness(const Matrix& high, const Matrix& low, std::size_t k,
                       Execution exec = Execution::sequential);

/// Mean silhouette with l2 distance; members of singleton clusters score 0.
/// Throws with fewer than two clusters.
double silhouette(const Matrix& y, std::span<const int> labels, Execution exec = Execution::sequential);

} // namespace thalparc::synth
