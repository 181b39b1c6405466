#pragma once

#include "thalparc/execution.hpp"
#include "thalparc/labels.hpp"
#include "thalparc/matrix.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace thalparc {

/// Neighbour count used for a latent dimension: 2 -> 100, 3 -> 75, 4 -> 50.
/// Any other dimension throws ErrorCode::explicit_k_required.
std::size_t default_k(std::size_t dim);

/// Labelled training embeddings. Construction drops Conflicted (unless
/// asked to keep it) and then every point left without a label.
class LabeledLatentSet {
public:
    LabeledLatentSet() = default;
    LabeledLatentSet(const Matrix& coords, std::span<const LabelSet> labels,
                     std::span<const std::string> subjects = {}, bool keep_conflicted = false);

    std::size_t size() const noexcept { return coords_.rows(); }
    std::size_t dim() const noexcept { return coords_.cols(); }
    const Matrix& coords() const noexcept { return coords_; }
    const std::vector<LabelSet>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& subjects() const noexcept { return subjects_; }

private:
    Matrix coords_;
    std::vector<LabelSet> labels_;
    std::vector<std::string> subjects_;
};

/// Votes are accumulated exactly in units of 1/360360 (the lcm of 1..14), so
/// a neighbour with m labels gives each exactly 1/m and totals sum to k.
inline constexpr std::int64_t kVoteUnit = 360360;

struct VoteResult {
    Nucleus winner = Nucleus::AN;
    std::array<std::int64_t, kNumLabelCodes> units{};
    std::array<double, kNumLabelCodes> mean_distance{};
    std::size_t k = 0;

    double weight(Nucleus n) const { return static_cast<double>(units[index_of(n)]) / kVoteUnit; }
    /// Labels with non-zero weight, best first (same ordering as the winner rule).
    std::vector<Nucleus> ranking() const;
};

/// Uniform vote over the k nearest labelled points (l2, ties by index).
/// Highest weight wins; ties go to the smaller mean neighbour distance, then
/// to schema order.
VoteResult knn_vote(std::span<const double> query, const LabeledLatentSet& set, std::size_t k);

namespace kernels {
std::vector<VoteResult> classify_serial(const Matrix& queries, const LabeledLatentSet& set, std::size_t k);
std::vector<VoteResult> classify_omp(const Matrix& queries, const LabeledLatentSet& set, std::size_t k);
} // namespace kernels

/// Exact search for every query.
std::vector<VoteResult> classify_points(const Matrix& queries, const LabeledLatentSet& set,
                                        std::size_t k, Execution exec = Execution::sequential);

} // namespace thalparc
