#include "thalparc/error.hpp"
#include "thalparc/manifold/curve_fit.hpp"
#include "thalparc/manifold/fuzzy_graph.hpp"
#include "thalparc/manifold/knn_graph.hpp"
#include "thalparc/manifold/layout.hpp"
#include "thalparc/manifold/spectral_init.hpp"
#include "thalparc/synthgen.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thalparc;
using namespace thalparc::manifold;

namespace {

// d/dy of f(|y - z|^2) at y = (r, 0), z = 0, divided by r: the coefficient
// multiplying (y - z) in the gradient.
template <class F>
double numeric_coefficient(F f, double r) {
    const double h = 1e-6 * r;
    return (f((r + h) * (r + h)) - f((r - h) * (r - h))) / (2 * h) / r;
}

struct Fixture {
    synth::Blobs blobs;
    FuzzyGraph graph;
    Matrix init;
};

Fixture make_fixture(std::uint64_t seed) {
    Fixture f;
    f.blobs = synth::gaussian_blobs(4, 60, 8, 5.0, seed);
    f.graph = build_fuzzy_graph(knn_graph_exact(f.blobs.points, 15));
    f.init = initialize_embedding(f.graph, 2, seed).coords;
    return f;
}

} // namespace

TEST(Gradients, AttractiveMatchesLogSimilarity) {
    const auto c = fit_curve(0.1, 1.0);
    const auto log_q = [&](double d2) { return std::log(1.0 / (1.0 + c.a * std::pow(d2, c.b))); };
    for (double r : {0.05, 0.3, 1.0, 2.5, 7.0}) {
        EXPECT_NEAR(attractive_coefficient(r * r, c), numeric_coefficient(log_q, r),
                    1e-6 * std::abs(attractive_coefficient(r * r, c)));
    }
    EXPECT_EQ(attractive_coefficient(0.0, c), 0.0);
}

TEST(Gradients, RepulsiveMatchesLogDissimilarity) {
    const auto c = fit_curve(0.1, 1.0);
    const auto log_1mq = [&](double d2) {
        const double q = 1.0 / (1.0 + c.a * std::pow(d2, c.b));
        return std::log(1.0 - q);
    };
    for (double r : {1.0, 2.5, 7.0}) {
        const double d2 = r * r;
        // The implementation softens d2 by 0.001; compare against the exact
        // gradient with that factor undone.
        EXPECT_NEAR(repulsive_coefficient(d2, c) * (0.001 + d2) / d2, numeric_coefficient(log_1mq, r),
                    1e-6 * repulsive_coefficient(d2, c));
    }
    EXPECT_GT(repulsive_coefficient(0.0, c), 0.0);
}

TEST(Layout, SequentialIsReproducibleAndFinite) {
    auto f = make_fixture(1);
    LayoutOptions o;
    o.epochs = 100;
    o.curve = fit_curve(0.1, 1.0);
    o.seed = 5;
    Matrix a = f.init, b = f.init;
    optimize_layout(a, f.graph, o);
    optimize_layout(b, f.graph, o);
    EXPECT_EQ(a, b);
    for (double v : a.data()) EXPECT_TRUE(std::isfinite(v));
    o.seed = 6;
    Matrix c = f.init;
    optimize_layout(c, f.graph, o);
    EXPECT_NE(a, c);
}

TEST(Layout, BothKernelsSeparateClusters) {
    auto f = make_fixture(2);
    LayoutOptions o;
    o.epochs = 200;
    o.curve = fit_curve(0.1, 1.0);
    for (Execution exec : {Execution::sequential, Execution::parallel}) {
        o.exec = exec;
        Matrix y = f.init;
        optimize_layout(y, f.graph, o);
        EXPECT_GT(synth::silhouette(y, f.blobs.labels), 0.7);
    }
}

TEST(Layout, NonFiniteInputIsReported) {
    auto f = make_fixture(3);
    LayoutOptions o;
    o.epochs = 3;
    o.curve = fit_curve(0.1, 1.0);
    f.init(5, 1) = std::nan("");
    try {
        optimize_layout(f.init, f.graph, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::non_finite);
    }
}

TEST(Layout, SingleEdgePullsTogether) {
    FuzzyGraph g;
    g.n = 2;
    g.row_ptr = {0, 1, 2};
    g.col = {1, 0};
    g.weight = {1.0, 1.0};
    g.rho = {0, 0};
    g.sigma = {1, 1};
    Matrix y(2, 2);
    y(1, 0) = 8.0;
    LayoutOptions o;
    o.epochs = 50;
    o.curve = fit_curve(0.1, 1.0);
    o.negative_sample_rate = 0;
    optimize_layout(y, g, o);
    EXPECT_LT(std::sqrt(squared_distance(y.row(0), y.row(1))), 1.0);
}

TEST(Refine, SerialAndParallelAgreeExactly) {
    auto f = make_fixture(4);
    LayoutOptions o;
    o.epochs = 50;
    o.curve = fit_curve(0.1, 1.0);
    Matrix anchors = f.init;
    optimize_layout(anchors, f.graph, o);
    std::vector<AnchorEdges> edges(30);
    Matrix moving(30, 2);
    for (std::size_t p = 0; p < 30; ++p) {
        for (std::uint32_t a = 0; a < 10; ++a) {
            edges[p].anchors.push_back(static_cast<std::uint32_t>((p * 7 + a * 13) % anchors.rows()));
            edges[p].weights.push_back(1.0 / (1.0 + a));
        }
    }
    o.epochs = 20;
    o.learning_rate = 0.25;
    Matrix a = moving, b = moving;
    refine_points(a, anchors, edges, o);
    o.exec = Execution::parallel;
    refine_points(b, anchors, edges, o);
    EXPECT_EQ(a, b);
    EXPECT_THROW(refine_points(a, anchors, std::span<const AnchorEdges>(edges).first(3), o), Error);
}
