#pragma once

#include "thalparc/manifold/fuzzy_graph.hpp"
#include "thalparc/matrix.hpp"

#include <cstdint>

namespace thalparc::manifold {

struct InitResult {
    Matrix coords;
    bool spectral = false;
    std::size_t iterations = 0;
};

struct SpectralOptions {
    std::size_t max_iterations = 300;
    /// Largest Ritz residual accepted for the returned eigenvectors.
    double tolerance = 1e-4;
    /// Extra block columns beyond the requested dimension.
    std::size_t oversample = 24;
};

/// Spectral layout from the `dim` bottom non-trivial eigenvectors of the
/// symmetric normalised Laplacian (block subspace iteration with
/// Rayleigh-Ritz), scaled so the largest absolute coordinate is 10.
/// Falls back to seeded uniform noise in [-10, 10]^dim when the solve does
/// not converge or the graph is too small. A single point sits at the origin.
InitResult initialize_embedding(const FuzzyGraph& graph, std::size_t dim, std::uint64_t seed,
                                const SpectralOptions& options = {});

/// The fallback used above, exposed for tests.
Matrix random_embedding(std::size_t n, std::size_t dim, std::uint64_t seed);

} // namespace thalparc::manifold
