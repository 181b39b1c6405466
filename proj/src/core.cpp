#include "thalparc/error.hpp"
#include "thalparc/matrix.hpp"

#include <algorithm>

namespace thalparc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::schema: return "schema";
    case ErrorCode::data: return "data";
    case ErrorCode::degenerate_tensor: return "degenerate-tensor";
    case ErrorCode::explicit_k_required: return "explicit-k-required";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::non_finite: return "non-finite";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::invalid_argument, "matrix data size does not match shape");
    }
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        auto src = row(indices[r]);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

} // namespace thalparc
