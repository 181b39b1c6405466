#include "thalparc/manifold/layout.hpp"

#include "thalparc/error.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace thalparc::manifold {

namespace {

struct EdgeSchedule {
    std::vector<std::uint32_t> head;
    std::vector<std::uint32_t> tail;
    std::vector<double> period;  // epochs between samples, 1 / w
};

EdgeSchedule make_schedule(const FuzzyGraph& g) {
    EdgeSchedule s;
    s.head.reserve(g.edges());
    s.tail.reserve(g.edges());
    s.period.reserve(g.edges());
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e) {
            if (g.weight[e] > 0.0) {
                s.head.push_back(static_cast<std::uint32_t>(i));
                s.tail.push_back(g.col[e]);
                s.period.push_back(1.0 / g.weight[e]);
            }
        }
    }
    return s;
}

void check_options(const Matrix& coords, const LayoutOptions& o) {
    if (o.epochs == 0) {
        throw Error(ErrorCode::invalid_argument, "layout needs at least one epoch");
    }
    if (coords.cols() == 0) {
        throw Error(ErrorCode::invalid_argument, "layout dimension must be positive");
    }
}

void check_finite(const Matrix& coords, std::size_t epoch) {
    for (std::size_t r = 0; r < coords.rows(); ++r) {
        for (double v : coords.row(r)) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::non_finite, "non-finite coordinate in row " + std::to_string(r) +
                                                       " after epoch " + std::to_string(epoch));
            }
        }
    }
}

inline double clip(double v, double bound) { return std::clamp(v, -bound, bound); }

template <class Rng>
void sample_edge(Matrix& coords, std::size_t i, std::size_t j, double alpha, const LayoutOptions& o,
                 Rng& rng) {
    const std::size_t dim = coords.cols();
    const std::size_t n = coords.rows();
    auto yi = coords.row(i);
    auto yj = coords.row(j);

    const double att = attractive_coefficient(squared_distance(yi, yj), o.curve);
    for (std::size_t d = 0; d < dim; ++d) {
        const double g = clip(att * (yi[d] - yj[d]), o.clip) * alpha;
        yi[d] += g;
        yj[d] -= g;
    }

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < o.negative_sample_rate; ++s) {
        const std::size_t k = pick(rng);
        if (k == i) {
            continue;
        }
        auto yk = coords.row(k);
        const double d2 = squared_distance(yi, yk);
        const double rep = repulsive_coefficient(d2, o.curve);
        for (std::size_t d = 0; d < dim; ++d) {
            const double g = d2 > 0.0 ? clip(rep * (yi[d] - yk[d]), o.clip) : o.clip;
            yi[d] += g * alpha;
        }
    }
}

} // namespace

double attractive_coefficient(double dist_squared, const CurveParams& c) noexcept {
    if (!(dist_squared > 0.0)) {
        return 0.0;
    }
    const double pb = std::pow(dist_squared, c.b);
    return -2.0 * c.a * c.b * (pb / dist_squared) / (c.a * pb + 1.0);
}

double repulsive_coefficient(double dist_squared, const CurveParams& c) noexcept {
    const double pb = dist_squared > 0.0 ? std::pow(dist_squared, c.b) : 0.0;
    return 2.0 * c.b / ((0.001 + dist_squared) * (c.a * pb + 1.0));
}

namespace kernels {

void layout_serial(Matrix& coords, const FuzzyGraph& graph, const LayoutOptions& o) {
    check_options(coords, o);
    const auto sched = make_schedule(graph);
    std::vector<double> next(sched.head.size(), 0.0);
    std::mt19937_64 rng(o.seed);
    const auto epochs = static_cast<double>(o.epochs);

    for (std::size_t epoch = 0; epoch < o.epochs; ++epoch) {
        const double alpha = o.learning_rate * (1.0 - static_cast<double>(epoch) / epochs);
        const auto now = static_cast<double>(epoch);
        for (std::size_t e = 0; e < sched.head.size(); ++e) {
            if (next[e] <= now) {
                sample_edge(coords, sched.head[e], sched.tail[e], alpha, o, rng);
                next[e] += sched.period[e];
            }
        }
        check_finite(coords, epoch);
    }
}

void layout_omp(Matrix& coords, const FuzzyGraph& graph, const LayoutOptions& o) {
    check_options(coords, o);
    const auto sched = make_schedule(graph);
    std::vector<double> next(sched.head.size(), 0.0);
    const auto epochs = static_cast<double>(o.epochs);
    const auto n_edges = static_cast<std::int64_t>(sched.head.size());

    for (std::size_t epoch = 0; epoch < o.epochs; ++epoch) {
        const double alpha = o.learning_rate * (1.0 - static_cast<double>(epoch) / epochs);
        const auto now = static_cast<double>(epoch);
#pragma omp parallel
        {
            std::seed_seq seq{o.seed, static_cast<std::uint64_t>(epoch),
                              static_cast<std::uint64_t>(omp_get_thread_num())};
            std::mt19937_64 rng(seq);
#pragma omp for schedule(static)
            for (std::int64_t e = 0; e < n_edges; ++e) {
                const auto ue = static_cast<std::size_t>(e);
                if (next[ue] <= now) {
                    sample_edge(coords, sched.head[ue], sched.tail[ue], alpha, o, rng);
                    next[ue] += sched.period[ue];
                }
            }
        }
        check_finite(coords, epoch);
    }
}

} // namespace kernels

void optimize_layout(Matrix& coords, const FuzzyGraph& graph, const LayoutOptions& options) {
    if (coords.rows() != graph.n) {
        throw Error(ErrorCode::invalid_argument, "layout coordinates do not match the graph");
    }
    if (options.exec == Execution::parallel) {
        kernels::layout_omp(coords, graph, options);
    } else {
        kernels::layout_serial(coords, graph, options);
    }
}

void refine_points(Matrix& moving, const Matrix& anchors, std::span<const AnchorEdges> edges,
                   const LayoutOptions& o) {
    check_options(moving, o);
    if (edges.size() != moving.rows() || anchors.cols() != moving.cols()) {
        throw Error(ErrorCode::invalid_argument, "refinement inputs disagree in shape");
    }
    if (anchors.rows() == 0) {
        return;
    }
    const std::size_t dim = moving.cols();
    const auto epochs = static_cast<double>(o.epochs);
    const auto n_points = static_cast<std::int64_t>(moving.rows());
    bool finite = true;

#pragma omp parallel for schedule(dynamic, 8) if (o.exec == Execution::parallel) reduction(&& : finite)
    for (std::int64_t p = 0; p < n_points; ++p) {
        const auto up = static_cast<std::size_t>(p);
        std::seed_seq seq{o.seed, static_cast<std::uint64_t>(up)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::size_t> pick(0, anchors.rows() - 1);
        const auto& pe = edges[up];
        std::vector<double> next(pe.anchors.size(), 0.0);
        auto y = moving.row(up);

        for (std::size_t epoch = 0; epoch < o.epochs; ++epoch) {
            const double alpha = o.learning_rate * (1.0 - static_cast<double>(epoch) / epochs);
            const auto now = static_cast<double>(epoch);
            for (std::size_t e = 0; e < pe.anchors.size(); ++e) {
                if (!(pe.weights[e] > 0.0) || next[e] > now) {
                    continue;
                }
                next[e] += 1.0 / pe.weights[e];
                const auto ya = anchors.row(pe.anchors[e]);
                const double att = attractive_coefficient(squared_distance(y, ya), o.curve);
                for (std::size_t d = 0; d < dim; ++d) {
                    y[d] += clip(att * (y[d] - ya[d]), o.clip) * alpha;
                }
                for (std::size_t s = 0; s < o.negative_sample_rate; ++s) {
                    const auto yk = anchors.row(pick(rng));
                    const double d2 = squared_distance(y, yk);
                    const double rep = repulsive_coefficient(d2, o.curve);
                    for (std::size_t d = 0; d < dim; ++d) {
                        const double g = d2 > 0.0 ? clip(rep * (y[d] - yk[d]), o.clip) : o.clip;
                        y[d] += g * alpha;
                    }
                }
            }
        }
        for (double v : y) {
            finite = finite && std::isfinite(v);
        }
    }
    if (!finite) {
        throw Error(ErrorCode::non_finite, "non-finite coordinate while placing new points");
    }
}

} // namespace thalparc::manifold
