#include "thalparc/manifold/fuzzy_graph.hpp"

#include "thalparc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace thalparc::manifold {

double membership(double distance, double rho, double sigma) noexcept {
    const double excess = distance - rho;
    if (excess <= 0.0) {
        return 1.0;
    }
    if (!(sigma > 0.0)) {
        return 0.0;
    }
    return std::exp(-excess / sigma);
}

SmoothKnn calibrate_smooth_knn(std::span<const double> distances, std::size_t k) {
    if (k < 2) {
        throw Error(ErrorCode::invalid_argument, "smooth-kNN calibration needs k >= 2");
    }
    if (distances.empty()) {
        throw Error(ErrorCode::invalid_argument, "smooth-kNN calibration of an empty row");
    }

    SmoothKnn out;
    for (double d : distances) {
        if (d > 0.0) {
            out.rho = d;
            break;
        }
    }
    const double mean =
        std::accumulate(distances.begin(), distances.end(), 0.0) / static_cast<double>(distances.size());
    const double target = std::log2(static_cast<double>(k));

    auto residual_at = [&](double sigma) {
        double sum = 0.0;
        for (double d : distances) {
            sum += membership(d, out.rho, sigma);
        }
        return sum - target;
    };

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double mid = mean > 0.0 ? mean : 1.0;
    double res = residual_at(mid);
    for (int it = 0; it < kCalibrationIterations && std::abs(res) > kCalibrationTolerance; ++it) {
        if (res > 0.0) {
            hi = mid;
            mid = 0.5 * (lo + hi);
        } else {
            lo = mid;
            mid = std::isinf(hi) ? 2.0 * mid : 0.5 * (lo + hi);
        }
        res = residual_at(mid);
    }

    out.sigma = mid;
    out.residual = std::abs(res);
    out.degenerate = out.residual > kCalibrationTolerance;
    const double floor = kMinSigmaScale * mean;
    if (out.sigma < floor || out.sigma == 0.0) {
        out.sigma = floor;
        out.residual = std::abs(residual_at(out.sigma));
        out.degenerate = true;
    }
    return out;
}

double FuzzyGraph::weight_of(std::size_t i, std::size_t j) const {
    const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
    if (it == last || *it != j) {
        return 0.0;
    }
    return weight[static_cast<std::size_t>(it - col.begin())];
}

FuzzyGraph build_fuzzy_graph(const NeighborGraph& graph) {
    const std::size_t n = graph.size();
    const std::size_t k = graph.n_neighbors();

    FuzzyGraph fg;
    fg.n = n;
    fg.rho.resize(n);
    fg.sigma.resize(n);

    struct Directed {
        std::uint32_t from;
        std::uint32_t to;
        double weight;
        bool transposed;
    };
    std::vector<Directed> entries;
    entries.reserve(2 * n * k);

    std::vector<double> dist(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = graph.row(i);
        for (std::size_t s = 0; s < k; ++s) {
            dist[s] = row[s].distance;
        }
        const auto cal = calibrate_smooth_knn(dist, std::max<std::size_t>(k, 2));
        fg.rho[i] = cal.rho;
        fg.sigma[i] = cal.sigma;
        fg.degenerate_rows += cal.degenerate;
        for (std::size_t s = 0; s < k; ++s) {
            const double w = membership(dist[s], cal.rho, cal.sigma);
            if (w > 0.0) {
                const auto a = static_cast<std::uint32_t>(i);
                entries.push_back({a, row[s].index, w, false});
                entries.push_back({row[s].index, a, w, true});
            }
        }
    }

    std::sort(entries.begin(), entries.end(), [](const Directed& x, const Directed& y) {
        return x.from != y.from ? x.from < y.from : x.to < y.to;
    });

    fg.row_ptr.assign(n + 1, 0);
    for (std::size_t e = 0; e < entries.size();) {
        const auto from = entries[e].from;
        const auto to = entries[e].to;
        double forward = 0.0;
        double backward = 0.0;
        for (; e < entries.size() && entries[e].from == from && entries[e].to == to; ++e) {
            (entries[e].transposed ? backward : forward) = entries[e].weight;
        }
        fg.col.push_back(to);
        fg.weight.push_back(fuzzy_union(forward, backward));
        ++fg.row_ptr[from + 1];
    }
    std::partial_sum(fg.row_ptr.begin(), fg.row_ptr.end(), fg.row_ptr.begin());
    return fg;
}

} // namespace thalparc::manifold
