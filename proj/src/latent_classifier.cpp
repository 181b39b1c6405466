#include "thalparc/latent_classifier.hpp"

#include "thalparc/error.hpp"
#include "thalparc/manifold/knn_graph.hpp"

#include <algorithm>
#include <cmath>

namespace thalparc {

std::size_t default_k(std::size_t dim) {
    switch (dim) {
    case 2: return 100;
    case 3: return 75;
    case 4: return 50;
    default:
        throw Error(ErrorCode::explicit_k_required,
                    "no default k for a " + std::to_string(dim) + "-D latent space; pass k explicitly");
    }
}

LabeledLatentSet::LabeledLatentSet(const Matrix& coords, std::span<const LabelSet> labels,
                                   std::span<const std::string> subjects, bool keep_conflicted) {
    if (labels.size() != coords.rows() || (!subjects.empty() && subjects.size() != coords.rows())) {
        throw Error(ErrorCode::invalid_argument, "labelled set inputs differ in length");
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const LabelSet l = keep_conflicted ? labels[i] : labels[i].scored();
        if (l.empty()) {
            continue;
        }
        for (double v : coords.row(i)) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::non_finite, "labelled latent point " + std::to_string(i) +
                                                       " is not finite");
            }
        }
        keep.push_back(i);
        labels_.push_back(l);
        if (!subjects.empty()) {
            subjects_.push_back(subjects[i]);
        }
    }
    coords_ = coords.select_rows(keep);
}

std::vector<Nucleus> VoteResult::ranking() const {
    std::vector<Nucleus> out;
    for (std::size_t c = 0; c < kNumLabelCodes; ++c) {
        if (units[c] > 0) {
            out.push_back(static_cast<Nucleus>(c));
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](Nucleus x, Nucleus y) {
        const auto ux = units[index_of(x)];
        const auto uy = units[index_of(y)];
        if (ux != uy) {
            return ux > uy;
        }
        return mean_distance[index_of(x)] < mean_distance[index_of(y)];
    });
    return out;
}

VoteResult knn_vote(std::span<const double> query, const LabeledLatentSet& set, std::size_t k) {
    if (set.size() == 0) {
        throw Error(ErrorCode::invalid_argument, "cannot vote over an empty labelled set");
    }
    if (k == 0 || k > set.size()) {
        throw Error(ErrorCode::invalid_argument, "k (" + std::to_string(k) + ") must be in [1, " +
                                                     std::to_string(set.size()) + "]");
    }
    if (query.size() != set.dim()) {
        throw Error(ErrorCode::invalid_argument, "query dimension does not match the latent set");
    }

    const auto nn = manifold::nearest_neighbors(set.coords(), query, k);
    VoteResult r;
    r.k = k;
    std::array<double, kNumLabelCodes> dist_sum{};
    std::array<std::size_t, kNumLabelCodes> hits{};
    for (const auto& n : nn) {
        const LabelSet& l = set.labels()[n.index];
        const auto share = kVoteUnit / static_cast<std::int64_t>(l.size());
        for (Nucleus c : l.members()) {
            r.units[index_of(c)] += share;
            dist_sum[index_of(c)] += n.distance;
            ++hits[index_of(c)];
        }
    }
    for (std::size_t c = 0; c < kNumLabelCodes; ++c) {
        r.mean_distance[c] = hits[c] ? dist_sum[c] / static_cast<double>(hits[c]) : 0.0;
    }
    r.winner = r.ranking().front();
    return r;
}

namespace kernels {

std::vector<VoteResult> classify_serial(const Matrix& queries, const LabeledLatentSet& set, std::size_t k) {
    std::vector<VoteResult> out(queries.rows());
    for (std::size_t q = 0; q < queries.rows(); ++q) {
        out[q] = knn_vote(queries.row(q), set, k);
    }
    return out;
}

std::vector<VoteResult> classify_omp(const Matrix& queries, const LabeledLatentSet& set, std::size_t k) {
    // Validate once so no exception escapes the parallel region.
    if (queries.rows() > 0) {
        (void)knn_vote(queries.row(0), set, k);
    }
    std::vector<VoteResult> out(queries.rows());
    const auto n = static_cast<std::int64_t>(queries.rows());
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t q = 0; q < n; ++q) {
        out[static_cast<std::size_t>(q)] = knn_vote(queries.row(static_cast<std::size_t>(q)), set, k);
    }
    return out;
}

} // namespace kernels

std::vector<VoteResult> classify_points(const Matrix& queries, const LabeledLatentSet& set,
                                        std::size_t k, Execution exec) {
    return exec == Execution::parallel ? kernels::classify_omp(queries, set, k)
                                       : kernels::classify_serial(queries, set, k);
}

} // namespace thalparc
