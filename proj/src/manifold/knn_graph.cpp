#include "thalparc/manifold/knn_graph.hpp"

#include "thalparc/error.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <random>

namespace thalparc::manifold {

namespace {

void check_k(const Matrix& x, std::size_t k) {
    if (k == 0) {
        throw Error(ErrorCode::invalid_argument, "n_neighbors must be positive");
    }
    if (k >= x.rows()) {
        throw Error(ErrorCode::invalid_argument, "n_neighbors (" + std::to_string(k) +
                                                     ") must be smaller than the number of points (" +
                                                     std::to_string(x.rows()) + ")");
    }
}

bool closer(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

// Bounded max-heap of squared distances per point.
class NeighborHeaps {
public:
    NeighborHeaps(std::size_t n, std::size_t k)
        : k_(k), index_(n * k, kEmpty), dist_(n * k, std::numeric_limits<double>::infinity()),
          fresh_(n * k, 0) {}

    std::size_t k() const { return k_; }
    std::uint32_t index(std::size_t p, std::size_t s) const { return index_[p * k_ + s]; }
    double dist(std::size_t p, std::size_t s) const { return dist_[p * k_ + s]; }
    bool fresh(std::size_t p, std::size_t s) const { return fresh_[p * k_ + s] != 0; }
    void mark_old(std::size_t p, std::size_t s) { fresh_[p * k_ + s] = 0; }

    bool push(std::size_t p, std::uint32_t q, double d) {
        const std::size_t base = p * k_;
        if (!(d < dist_[base])) {
            return false;
        }
        for (std::size_t s = 0; s < k_; ++s) {
            if (index_[base + s] == q) {
                return false;
            }
        }
        // Replace the root and sift down.
        std::size_t pos = 0;
        while (true) {
            const std::size_t l = 2 * pos + 1;
            const std::size_t r = l + 1;
            std::size_t next = pos;
            double next_d = d;
            if (l < k_ && dist_[base + l] > next_d) {
                next = l;
                next_d = dist_[base + l];
            }
            if (r < k_ && dist_[base + r] > next_d) {
                next = r;
                next_d = dist_[base + r];
            }
            if (next == pos) {
                break;
            }
            dist_[base + pos] = dist_[base + next];
            index_[base + pos] = index_[base + next];
            fresh_[base + pos] = fresh_[base + next];
            pos = next;
        }
        dist_[base + pos] = d;
        index_[base + pos] = q;
        fresh_[base + pos] = 1;
        return true;
    }

    static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

private:
    std::size_t k_;
    std::vector<std::uint32_t> index_;
    std::vector<double> dist_;
    std::vector<char> fresh_;
};

void sample_down(std::vector<std::uint32_t>& v, std::size_t cap, std::mt19937_64& rng) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() > cap) {
        for (std::size_t i = 0; i < cap; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, v.size() - 1);
            std::swap(v[i], v[pick(rng)]);
        }
        v.resize(cap);
    }
}

} // namespace

std::vector<Neighbor> nearest_neighbors(const Matrix& reference, std::span<const double> query,
                                        std::size_t k, std::int64_t exclude) {
    std::vector<Neighbor> all;
    all.reserve(reference.rows());
    for (std::size_t j = 0; j < reference.rows(); ++j) {
        if (static_cast<std::int64_t>(j) == exclude) {
            continue;
        }
        all.push_back({static_cast<std::uint32_t>(j), squared_distance(query, reference.row(j))});
    }
    k = std::min(k, all.size());
    std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
    all.resize(k);
    std::sort(all.begin(), all.end(), closer);
    for (auto& n : all) {
        n.distance = std::sqrt(n.distance);
    }
    return all;
}

namespace kernels {

NeighborGraph knn_exact_serial(const Matrix& x, std::size_t n_neighbors) {
    check_k(x, n_neighbors);
    NeighborGraph g(x.rows(), n_neighbors);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto nn = nearest_neighbors(x, x.row(i), n_neighbors, static_cast<std::int64_t>(i));
        std::copy(nn.begin(), nn.end(), g.row(i).begin());
    }
    return g;
}

NeighborGraph knn_exact_omp(const Matrix& x, std::size_t n_neighbors) {
    check_k(x, n_neighbors);
    NeighborGraph g(x.rows(), n_neighbors);
    const auto n = static_cast<std::int64_t>(x.rows());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto nn = nearest_neighbors(x, x.row(static_cast<std::size_t>(i)), n_neighbors, i);
        std::copy(nn.begin(), nn.end(), g.row(static_cast<std::size_t>(i)).begin());
    }
    return g;
}

} // namespace kernels

NeighborGraph knn_graph_exact(const Matrix& x, std::size_t n_neighbors, Execution exec) {
    return exec == Execution::parallel ? kernels::knn_exact_omp(x, n_neighbors)
                                       : kernels::knn_exact_serial(x, n_neighbors);
}

NeighborGraph knn_graph_approx(const Matrix& x, std::size_t n_neighbors, std::uint64_t seed,
                               const NNDescentOptions& options) {
    check_k(x, n_neighbors);
    const std::size_t n = x.rows();
    const std::size_t k = n_neighbors;
    if (n <= 2 * k) {
        return knn_graph_exact(x, k);
    }

    std::mt19937_64 rng(seed);
    NeighborHeaps heaps(n, k);
    auto dist2 = [&](std::size_t a, std::size_t b) { return squared_distance(x.row(a), x.row(b)); };

    std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(n - 1));
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t filled = 0;
        while (filled < k) {
            const std::uint32_t q = any(rng);
            if (q != p && heaps.push(p, q, dist2(p, q))) {
                ++filled;
            }
        }
    }

    const std::size_t cap = options.max_candidates;
    std::vector<std::vector<std::uint32_t>> fresh(n), old(n), fresh_rev(n), old_rev(n);
    std::vector<std::size_t> slots;
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        for (std::size_t p = 0; p < n; ++p) {
            fresh[p].clear();
            old[p].clear();
            fresh_rev[p].clear();
            old_rev[p].clear();
        }
        for (std::size_t p = 0; p < n; ++p) {
            slots.clear();
            for (std::size_t s = 0; s < k; ++s) {
                if (heaps.fresh(p, s)) {
                    slots.push_back(s);
                } else {
                    old[p].push_back(heaps.index(p, s));
                }
            }
            if (slots.size() > cap) {
                for (std::size_t i = 0; i < cap; ++i) {
                    std::uniform_int_distribution<std::size_t> pick(i, slots.size() - 1);
                    std::swap(slots[i], slots[pick(rng)]);
                }
                slots.resize(cap);
            }
            for (std::size_t s : slots) {
                fresh[p].push_back(heaps.index(p, s));
                heaps.mark_old(p, s);
            }
            sample_down(old[p], cap, rng);
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::uint32_t q : fresh[p]) {
                fresh_rev[q].push_back(static_cast<std::uint32_t>(p));
            }
            for (std::uint32_t q : old[p]) {
                old_rev[q].push_back(static_cast<std::uint32_t>(p));
            }
        }
        for (std::size_t p = 0; p < n; ++p) {
            sample_down(fresh_rev[p], cap, rng);
            sample_down(old_rev[p], cap, rng);
            fresh[p].insert(fresh[p].end(), fresh_rev[p].begin(), fresh_rev[p].end());
            old[p].insert(old[p].end(), old_rev[p].begin(), old_rev[p].end());
            std::sort(fresh[p].begin(), fresh[p].end());
            fresh[p].erase(std::unique(fresh[p].begin(), fresh[p].end()), fresh[p].end());
            std::sort(old[p].begin(), old[p].end());
            old[p].erase(std::unique(old[p].begin(), old[p].end()), old[p].end());
        }

        std::size_t updates = 0;
        for (std::size_t p = 0; p < n; ++p) {
            const auto& nf = fresh[p];
            const auto& no = old[p];
            for (std::size_t a = 0; a < nf.size(); ++a) {
                for (std::size_t b = a + 1; b < nf.size(); ++b) {
                    const double d = dist2(nf[a], nf[b]);
                    updates += heaps.push(nf[a], nf[b], d);
                    updates += heaps.push(nf[b], nf[a], d);
                }
                for (std::uint32_t q : no) {
                    if (q == nf[a]) {
                        continue;
                    }
                    const double d = dist2(nf[a], q);
                    updates += heaps.push(nf[a], q, d);
                    updates += heaps.push(q, nf[a], d);
                }
            }
        }
        if (static_cast<double>(updates) < options.delta * static_cast<double>(n * k)) {
            break;
        }
    }

    NeighborGraph g(n, k);
    for (std::size_t p = 0; p < n; ++p) {
        auto row = g.row(p);
        for (std::size_t s = 0; s < k; ++s) {
            row[s] = {heaps.index(p, s), heaps.dist(p, s)};
        }
        std::sort(row.begin(), row.end(), closer);
        for (auto& e : row) {
            e.distance = std::sqrt(e.distance);
        }
    }
    return g;
}

NeighborGraph knn_graph(const Matrix& x, std::size_t n_neighbors, KnnMethod method,
                        std::uint64_t seed, Execution exec) {
    const std::size_t n = x.rows();
    bool approx = method == KnnMethod::approximate;
    if (method == KnnMethod::automatic) {
        approx = n > 2 * n_neighbors && n_neighbors * n_neighbors < n;
    }
    return approx ? knn_graph_approx(x, n_neighbors, seed) : knn_graph_exact(x, n_neighbors, exec);
}

double graph_recall(const NeighborGraph& approx, const NeighborGraph& exact) {
    if (approx.size() != exact.size() || approx.n_neighbors() != exact.n_neighbors()) {
        throw Error(ErrorCode::invalid_argument, "graphs differ in shape");
    }
    std::size_t hits = 0;
    std::vector<std::uint32_t> truth;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        truth.clear();
        for (const auto& e : exact.row(i)) {
            truth.push_back(e.index);
        }
        std::sort(truth.begin(), truth.end());
        for (const auto& e : approx.row(i)) {
            hits += std::binary_search(truth.begin(), truth.end(), e.index);
        }
    }
    const double total = static_cast<double>(exact.size() * exact.n_neighbors());
    return total > 0 ? static_cast<double>(hits) / total : 1.0;
}

} // namespace thalparc::manifold
