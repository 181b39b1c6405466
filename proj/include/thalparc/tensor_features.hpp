#pragma once

#include <array>
#include <cstddef>
#include <vector>

/// Scalar and orientation features derived from 3x3 diffusion tensors.
namespace thalparc::tensor {

using Vec3 = std::array<double, 3>;

/// Six unique components of a symmetric tensor. Units are whatever the
/// caller uses (typically mm^2/s); nothing here depends on them.
struct DiffusionTensor {
    double dxx = 0.0;
    double dyy = 0.0;
    double dzz = 0.0;
    double dxy = 0.0;
    double dxz = 0.0;
    double dyz = 0.0;
};

/// Eigenvalues in descending order with matching unit eigenvectors.
struct TensorEigen {
    Vec3 values{};
    std::array<Vec3, 3> vectors{};
};

struct ScalarMaps {
    double fa = 0.0;
    double md = 0.0;
    double rd = 0.0;
    double ad = 0.0;
    double tr = 0.0;
    double mode = 0.0;
};

struct WestinIndices {
    double cl = 0.0;
    double cp = 0.0;
    double cs = 0.0;
};

using KnutssonVector = std::array<double, 5>;

/// Cyclic Jacobi eigendecomposition. Throws ErrorCode::non_finite on NaN/Inf input.
TensorEigen eigen_decompose(const DiffusionTensor& tensor);

/// FA, MD, RD, AD, trace and Ennis-Kindlmann mode. An all-zero tensor maps
/// to all-zero scalars.
ScalarMaps scalar_maps(const TensorEigen& eig);

/// lambda1-normalised Westin shares; they always sum to one.
/// Throws ErrorCode::degenerate_tensor when lambda1 <= 0.
WestinIndices westin_indices(const TensorEigen& eig);

/// Even-degree 5-D embedding of an orientation: v and -v map to the same point.
/// The input is renormalised; a zero vector is rejected.
KnutssonVector knutsson_map(const Vec3& direction);

/// Knutsson vectors on a regular lattice. Index (i, j, k) lives at
/// (k * ny + j) * nx + i, so i varies fastest.
class KnutssonField {
public:
    KnutssonField(std::size_t nx, std::size_t ny, std::size_t nz);

    std::size_t nx() const noexcept { return dims_[0]; }
    std::size_t ny() const noexcept { return dims_[1]; }
    std::size_t nz() const noexcept { return dims_[2]; }
    std::array<std::size_t, 3> dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return (k * dims_[1] + j) * dims_[0] + i;
    }
    KnutssonVector& at(std::size_t i, std::size_t j, std::size_t k) { return values_[index(i, j, k)]; }
    const KnutssonVector& at(std::size_t i, std::size_t j, std::size_t k) const {
        return values_[index(i, j, k)];
    }

private:
    std::array<std::size_t, 3> dims_;
    std::vector<KnutssonVector> values_;
};

/// Per-voxel Frobenius norm of the 5x3 spatial Jacobian of the field, using
/// central differences inside and one-sided differences on the lattice faces.
/// Output uses the field's indexing. Needs at least two voxels per axis.
std::vector<double> knutsson_edge_map(const KnutssonField& field, const Vec3& spacing);

} // namespace thalparc::tensor
