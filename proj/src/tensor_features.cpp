#include "thalparc/tensor_features.hpp"

#include "thalparc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thalparc::tensor {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// One Jacobi rotation zeroing a[p][q]; v accumulates the rotations as columns.
void rotate(Mat3& a, Mat3& v, int p, int q) {
    if (a[p][q] == 0.0) {
        return;
    }
    const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
    const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    for (int k = 0; k < 3; ++k) {
        const double akp = a[k][p];
        const double akq = a[k][q];
        a[k][p] = c * akp - s * akq;
        a[k][q] = s * akp + c * akq;
    }
    for (int k = 0; k < 3; ++k) {
        const double apk = a[p][k];
        const double aqk = a[q][k];
        a[p][k] = c * apk - s * aqk;
        a[q][k] = s * apk + c * aqk;
    }
    for (int k = 0; k < 3; ++k) {
        const double vkp = v[k][p];
        const double vkq = v[k][q];
        v[k][p] = c * vkp - s * vkq;
        v[k][q] = s * vkp + c * vkq;
    }
}

double offdiag_norm(const Mat3& a) {
    return std::sqrt(a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]);
}

double frobenius(const Mat3& a) {
    double s = 0.0;
    for (const auto& r : a) {
        for (double x : r) {
            s += x * x;
        }
    }
    return std::sqrt(s);
}

} // namespace

TensorEigen eigen_decompose(const DiffusionTensor& t) {
    for (double x : {t.dxx, t.dyy, t.dzz, t.dxy, t.dxz, t.dyz}) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::non_finite, "diffusion tensor has a non-finite component");
        }
    }

    Mat3 a{{{t.dxx, t.dxy, t.dxz}, {t.dxy, t.dyy, t.dyz}, {t.dxz, t.dyz, t.dzz}}};
    Mat3 v{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

    const double scale = frobenius(a);
    for (int sweep = 0; sweep < 64 && offdiag_norm(a) > 1e-18 * scale; ++sweep) {
        rotate(a, v, 0, 1);
        rotate(a, v, 0, 2);
        rotate(a, v, 1, 2);
    }

    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] > a[y][y]; });

    TensorEigen out;
    for (int r = 0; r < 3; ++r) {
        const int c = order[r];
        out.values[r] = a[c][c];
        out.vectors[r] = {v[0][c], v[1][c], v[2][c]};
    }
    return out;
}

ScalarMaps scalar_maps(const TensorEigen& eig) {
    const auto& l = eig.values;
    ScalarMaps s;
    s.tr = l[0] + l[1] + l[2];
    s.md = s.tr / 3.0;
    s.ad = l[0];
    s.rd = 0.5 * (l[1] + l[2]);

    const double norm = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
    const Vec3 dev{l[0] - s.md, l[1] - s.md, l[2] - s.md};
    const double dev_norm = std::sqrt(dev[0] * dev[0] + dev[1] * dev[1] + dev[2] * dev[2]);

    if (norm > 0.0) {
        s.fa = std::clamp(std::sqrt(1.5) * dev_norm / norm, 0.0, 1.0);
    }
    if (dev_norm > 0.0) {
        const double det = (dev[0] / dev_norm) * (dev[1] / dev_norm) * (dev[2] / dev_norm);
        s.mode = std::clamp(3.0 * std::sqrt(6.0) * det, -1.0, 1.0);
    }
    return s;
}

WestinIndices westin_indices(const TensorEigen& eig) {
    const auto& l = eig.values;
    if (!(l[0] > 0.0)) {
        throw Error(ErrorCode::degenerate_tensor, "westin indices need a positive largest eigenvalue");
    }
    return {(l[0] - l[1]) / l[0], (l[1] - l[2]) / l[0], l[2] / l[0]};
}

KnutssonVector knutsson_map(const Vec3& direction) {
    const double n = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] +
                               direction[2] * direction[2]);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorCode::invalid_argument, "knutsson map needs a non-zero finite direction");
    }
    const double x = direction[0] / n;
    const double y = direction[1] / n;
    const double z = direction[2] / n;
    return {x * x - y * y, 2.0 * x * y, 2.0 * x * z, 2.0 * y * z,
            (2.0 * z * z - x * x - y * y) / std::sqrt(3.0)};
}

KnutssonField::KnutssonField(std::size_t nx, std::size_t ny, std::size_t nz)
    : dims_{nx, ny, nz}, values_(nx * ny * nz, KnutssonVector{}) {}

std::vector<double> knutsson_edge_map(const KnutssonField& field, const Vec3& spacing) {
    const auto dims = field.dims();
    if (std::any_of(dims.begin(), dims.end(), [](std::size_t n) { return n < 2; })) {
        throw Error(ErrorCode::invalid_argument, "edge map needs at least two voxels along every axis");
    }
    if (std::any_of(spacing.begin(), spacing.end(), [](double h) { return !(h > 0.0); })) {
        throw Error(ErrorCode::invalid_argument, "lattice spacing must be positive");
    }

    std::vector<double> out(field.size(), 0.0);
    for (std::size_t k = 0; k < dims[2]; ++k) {
        for (std::size_t j = 0; j < dims[1]; ++j) {
            for (std::size_t i = 0; i < dims[0]; ++i) {
                const std::array<std::size_t, 3> pos{i, j, k};
                double sum = 0.0;
                for (int axis = 0; axis < 3; ++axis) {
                    auto lo = pos;
                    auto hi = pos;
                    double steps = 2.0;
                    if (pos[axis] == 0) {
                        hi[axis] += 1;
                        steps = 1.0;
                    } else if (pos[axis] + 1 == dims[axis]) {
                        lo[axis] -= 1;
                        steps = 1.0;
                    } else {
                        lo[axis] -= 1;
                        hi[axis] += 1;
                    }
                    const auto& a = field.at(lo[0], lo[1], lo[2]);
                    const auto& b = field.at(hi[0], hi[1], hi[2]);
                    for (std::size_t c = 0; c < 5; ++c) {
                        const double g = (b[c] - a[c]) / (steps * spacing[axis]);
                        sum += g * g;
                    }
                }
                out[field.index(i, j, k)] = std::sqrt(sum);
            }
        }
    }
    return out;
}

} // namespace thalparc::tensor
