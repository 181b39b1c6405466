#include "thalparc/manifold/spectral_init.hpp"

#include "thalparc/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace thalparc::manifold {

namespace {

constexpr double kLayoutRadius = 10.0;

using Block = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Z = (I + D^-1/2 W D^-1/2) Q
void apply_operator(const FuzzyGraph& g, const Eigen::VectorXd& inv_sqrt_deg, const Block& q,
                    Block& z) {
    z = q;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e) {
            const std::size_t j = g.col[e];
            const double w = g.weight[e] * inv_sqrt_deg[static_cast<Eigen::Index>(i)] *
                             inv_sqrt_deg[static_cast<Eigen::Index>(j)];
            z.row(static_cast<Eigen::Index>(i)) += w * q.row(static_cast<Eigen::Index>(j));
        }
    }
}

void deflate(Block& q, const Eigen::VectorXd& trivial) {
    q -= trivial * (trivial.transpose() * q);
}

Block orthonormalize(const Block& q) {
    Eigen::HouseholderQR<Block> qr(q);
    return qr.householderQ() * Block::Identity(q.rows(), q.cols());
}

} // namespace

Matrix random_embedding(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-kLayoutRadius, kLayoutRadius);
    Matrix out(n, dim);
    for (double& v : out.data()) {
        v = u(rng);
    }
    return out;
}

InitResult initialize_embedding(const FuzzyGraph& graph, std::size_t dim, std::uint64_t seed,
                                const SpectralOptions& options) {
    const std::size_t n = graph.n;
    InitResult out;
    if (n == 0) {
        out.coords = Matrix(0, dim);
        return out;
    }
    if (n == 1) {
        out.coords = Matrix(1, dim, 0.0);
        out.spectral = true;
        return out;
    }
    if (dim == 0 || dim + 1 >= n) {
        out.coords = random_embedding(n, dim, seed);
        return out;
    }

    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::VectorXd degree = Eigen::VectorXd::Zero(rows);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = graph.row_ptr[i]; e < graph.row_ptr[i + 1]; ++e) {
            degree[static_cast<Eigen::Index>(i)] += graph.weight[e];
        }
    }
    Eigen::VectorXd inv_sqrt_deg(rows);
    Eigen::VectorXd trivial(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        inv_sqrt_deg[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
        trivial[i] = std::sqrt(degree[i]);
    }
    if (trivial.norm() == 0.0) {
        out.coords = random_embedding(n, dim, seed);
        return out;
    }
    trivial.normalize();

    const auto block = static_cast<Eigen::Index>(std::min(n - 1, dim + options.oversample));
    const auto want = static_cast<Eigen::Index>(dim);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Block q(rows, block);
    for (Eigen::Index c = 0; c < block; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            q(r, c) = normal(rng);
        }
    }
    deflate(q, trivial);
    q = orthonormalize(q);

    Block z;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        apply_operator(graph, inv_sqrt_deg, q, z);
        deflate(z, trivial);

        const Block h = q.transpose() * z;
        Eigen::SelfAdjointEigenSolver<Block> small(0.5 * (h + h.transpose()));
        // Eigen sorts ascending; the wanted pairs are the largest.
        const Block ritz = q * small.eigenvectors().rightCols(want);
        const Block image = z * small.eigenvectors().rightCols(want);
        double worst = 0.0;
        for (Eigen::Index c = 0; c < want; ++c) {
            const double theta = small.eigenvalues()[block - want + c];
            worst = std::max(worst, (image.col(c) - theta * ritz.col(c)).norm());
        }
        if (worst <= options.tolerance) {
            out.coords = Matrix(n, dim);
            // Largest M eigenvalue first == smallest Laplacian eigenvalue first.
            for (Eigen::Index c = 0; c < want; ++c) {
                const Eigen::Index src = want - 1 - c;
                for (Eigen::Index r = 0; r < rows; ++r) {
                    out.coords(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = ritz(r, src);
                }
            }
            double max_abs = 0.0;
            for (double v : out.coords.data()) {
                max_abs = std::max(max_abs, std::abs(v));
            }
            if (max_abs > 0.0 && std::isfinite(max_abs)) {
                for (double& v : out.coords.data()) {
                    v *= kLayoutRadius / max_abs;
                }
                out.spectral = true;
                out.iterations = it;
                return out;
            }
            break;
        }
        q = orthonormalize(z);
    }

    out.coords = random_embedding(n, dim, seed);
    return out;
}

} // namespace thalparc::manifold
