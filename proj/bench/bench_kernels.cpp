// Serial reference kernels against their OpenMP counterparts.

#include "thalparc/latent_classifier.hpp"
#include "thalparc/manifold/fuzzy_graph.hpp"
#include "thalparc/manifold/knn_graph.hpp"
#include "thalparc/manifold/layout.hpp"
#include "thalparc/manifold/spectral_init.hpp"
#include "thalparc/synthgen.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace thalparc;

namespace {

synth::Blobs blobs(std::size_t n) { return synth::gaussian_blobs(10, n / 10, 16, 4.0, 1); }

template <bool Parallel>
void BM_KnnExact(benchmark::State& state) {
    const auto b = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto g = Parallel ? manifold::kernels::knn_exact_omp(b.points, 15)
                          : manifold::kernels::knn_exact_serial(b.points, 15);
        benchmark::DoNotOptimize(g);
    }
}

template <bool Parallel>
void BM_Layout(benchmark::State& state) {
    const auto b = blobs(static_cast<std::size_t>(state.range(0)));
    const auto graph = manifold::build_fuzzy_graph(manifold::knn_graph_exact(b.points, 15));
    manifold::LayoutOptions o;
    o.epochs = 50;
    for (auto _ : state) {
        state.PauseTiming();
        auto coords = manifold::random_embedding(b.points.rows(), 2, 3);
        state.ResumeTiming();
        if (Parallel) manifold::kernels::layout_omp(coords, graph, o);
        else manifold::kernels::layout_serial(coords, graph, o);
        benchmark::DoNotOptimize(coords);
    }
}

template <bool Parallel>
void BM_Classify(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix coords(n, 2), queries(n / 4, 2);
    for (double& v : coords.data()) v = g(rng);
    for (double& v : queries.data()) v = g(rng);
    std::vector<LabelSet> labels(n);
    for (auto& l : labels) l.insert(kScoredNuclei[rng() % kNumNuclei]);
    const LabeledLatentSet set(coords, labels);
    for (auto _ : state) {
        auto v = Parallel ? kernels::classify_omp(queries, set, 15) : kernels::classify_serial(queries, set, 15);
        benchmark::DoNotOptimize(v);
    }
}

template <bool Parallel>
void BM_Trustworthiness(benchmark::State& state) {
    const auto b = blobs(static_cast<std::size_t>(state.range(0)));
    Matrix low(b.points.rows(), 2);
    for (std::size_t r = 0; r < low.rows(); ++r) {
        low(r, 0) = b.points(r, 0);
        low(r, 1) = b.points(r, 1);
    }
    for (auto _ : state) {
        const double t = Parallel ? synth::kernels::trustworthiness_omp(b.points, low, 15)
                                  : synth::kernels::trustworthiness_serial(b.points, low, 15);
        benchmark::DoNotOptimize(t);
    }
}

} // namespace

BENCHMARK(BM_KnnExact<false>)->Name("knn_exact/serial")->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnExact<true>)->Name("knn_exact/omp")->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Layout<false>)->Name("layout/serial")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Layout<true>)->Name("layout/omp")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Classify<false>)->Name("classify/serial")->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Classify<true>)->Name("classify/omp")->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trustworthiness<false>)->Name("trustworthiness/serial")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trustworthiness<true>)->Name("trustworthiness/omp")->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
