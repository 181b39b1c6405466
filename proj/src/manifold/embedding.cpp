#include "thalparc/manifold/embedding.hpp"

#include "thalparc/error.hpp"
#include "thalparc/manifold/fuzzy_graph.hpp"
#include "thalparc/manifold/layout.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>

namespace thalparc::manifold {

namespace {

constexpr std::array<char, 8> kMagic{'T', 'H', 'P', 'M', 'O', 'D', 'L', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) {
        b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    out.write(b.data(), 8);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(out, bits);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<char, 8> b{};
    if (!in.read(b.data(), 8)) {
        throw Error(ErrorCode::io, "truncated embedding model");
    }
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | static_cast<unsigned char>(b[static_cast<std::size_t>(i)]);
    }
    return v;
}

double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

AnchorEdges anchor_edges(const std::vector<Neighbor>& nn) {
    std::vector<double> dist(nn.size());
    for (std::size_t s = 0; s < nn.size(); ++s) {
        dist[s] = nn[s].distance;
    }
    const auto cal = calibrate_smooth_knn(dist, std::max<std::size_t>(nn.size(), 2));
    AnchorEdges e;
    for (std::size_t s = 0; s < nn.size(); ++s) {
        e.anchors.push_back(nn[s].index);
        e.weights.push_back(membership(dist[s], cal.rho, cal.sigma));
    }
    return e;
}

} // namespace

std::size_t resolve_n_neighbors(std::size_t requested, std::size_t n_points) {
    std::size_t k = requested;
    if (k == 0) {
        k = std::min(kDefaultNeighbors, std::max<std::size_t>(15, n_points / 15));
    }
    return n_points == 0 ? 0 : std::min(k, n_points - 1);
}

EmbeddingModel EmbeddingModel::fit(const Matrix& features, const UmapOptions& options,
                                   FitDiagnostics* diagnostics) {
    if (features.rows() < 3) {
        throw Error(ErrorCode::invalid_argument, "embedding needs at least three points");
    }
    if (options.dim == 0) {
        throw Error(ErrorCode::invalid_argument, "latent dimension must be positive");
    }
    if (options.epochs == 0) {
        throw Error(ErrorCode::invalid_argument, "embedding needs at least one epoch");
    }

    EmbeddingModel m;
    m.options_ = options;
    m.n_neighbors_ = std::max<std::size_t>(2, resolve_n_neighbors(options.n_neighbors, features.rows()));
    m.curve_ = fit_curve(options.min_dist, options.spread);
    m.features_ = features;

    const auto graph = knn_graph(features, m.n_neighbors_, options.knn, options.seed, options.exec);
    const auto fuzzy = build_fuzzy_graph(graph);
    m.rho_ = fuzzy.rho;
    m.sigma_ = fuzzy.sigma;

    auto init = initialize_embedding(fuzzy, options.dim, options.seed);
    m.coords_ = std::move(init.coords);

    LayoutOptions lo;
    lo.epochs = options.epochs;
    lo.curve = m.curve_;
    lo.learning_rate = options.learning_rate;
    lo.negative_sample_rate = options.negative_sample_rate;
    lo.seed = options.seed;
    lo.exec = options.exec;
    optimize_layout(m.coords_, fuzzy, lo);

    if (diagnostics) {
        diagnostics->spectral_init = init.spectral;
        diagnostics->spectral_iterations = init.iterations;
        diagnostics->fuzzy_edges = fuzzy.edges();
        diagnostics->degenerate_rows = fuzzy.degenerate_rows;
    }
    return m;
}

Matrix EmbeddingModel::initial_positions(const Matrix& points, std::vector<AnchorEdges>* edges) const {
    if (points.cols() != features_.cols()) {
        throw Error(ErrorCode::invalid_argument,
                    "new points have " + std::to_string(points.cols()) +
                        " features, the model was trained on " + std::to_string(features_.cols()));
    }
    const std::size_t n = points.rows();
    const std::size_t dim = coords_.cols();
    Matrix out(n, dim);
    std::vector<AnchorEdges> local(n);
    const auto count = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(dynamic, 8) if (options_.exec == Execution::parallel)
    for (std::int64_t p = 0; p < count; ++p) {
        const auto up = static_cast<std::size_t>(p);
        auto e = anchor_edges(nearest_neighbors(features_, points.row(up), n_neighbors_));
        double total = 0.0;
        for (double w : e.weights) {
            total += w;
        }
        auto y = out.row(up);
        for (std::size_t s = 0; s < e.anchors.size(); ++s) {
            const double w = total > 0.0 ? e.weights[s] / total : 1.0 / static_cast<double>(e.anchors.size());
            const auto src = coords_.row(e.anchors[s]);
            for (std::size_t d = 0; d < dim; ++d) {
                y[d] += w * src[d];
            }
        }
        local[up] = std::move(e);
    }
    if (edges) {
        *edges = std::move(local);
    }
    return out;
}

Matrix EmbeddingModel::transform(const Matrix& points, Execution exec) const {
    std::vector<AnchorEdges> edges;
    Matrix out = initial_positions(points, &edges);
    if (out.rows() == 0) {
        return out;
    }
    LayoutOptions lo;
    lo.epochs = std::max<std::size_t>(1, options_.epochs / 10);
    lo.curve = curve_;
    lo.learning_rate = options_.learning_rate * options_.transform_rate_scale;
    lo.negative_sample_rate = options_.negative_sample_rate;
    lo.seed = options_.seed;
    lo.exec = exec;
    refine_points(out, coords_, edges, lo);
    return out;
}

void EmbeddingModel::write(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    put_u64(out, coords_.cols());
    put_u64(out, coords_.rows());
    put_u64(out, features_.cols());
    put_f64(out, curve_.a);
    put_f64(out, curve_.b);
    put_u64(out, options_.seed);
    put_u64(out, options_.epochs);
    put_u64(out, n_neighbors_);
    put_u64(out, options_.n_neighbors);
    put_f64(out, options_.min_dist);
    put_f64(out, options_.spread);
    put_f64(out, options_.learning_rate);
    put_u64(out, options_.negative_sample_rate);
    put_f64(out, options_.transform_rate_scale);
    put_u64(out, static_cast<std::uint64_t>(options_.knn));
    for (double v : coords_.data()) {
        put_f64(out, v);
    }
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        put_f64(out, rho_[i]);
        put_f64(out, sigma_[i]);
    }
    for (double v : features_.data()) {
        put_f64(out, v);
    }
    if (!out) {
        throw Error(ErrorCode::io, "failed to write embedding model");
    }
}

EmbeddingModel EmbeddingModel::read(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw Error(ErrorCode::schema, "not an embedding model file");
    }
    EmbeddingModel m;
    const auto dim = get_u64(in);
    const auto n = get_u64(in);
    const auto feat = get_u64(in);
    if (dim == 0 || dim > 64 || n > (1ull << 32) || feat > (1ull << 20)) {
        throw Error(ErrorCode::schema, "embedding model header is implausible");
    }
    m.curve_.a = get_f64(in);
    m.curve_.b = get_f64(in);
    m.options_.seed = get_u64(in);
    m.options_.epochs = get_u64(in);
    m.n_neighbors_ = get_u64(in);
    m.options_.n_neighbors = get_u64(in);
    m.options_.min_dist = get_f64(in);
    m.options_.spread = get_f64(in);
    m.options_.learning_rate = get_f64(in);
    m.options_.negative_sample_rate = get_u64(in);
    m.options_.transform_rate_scale = get_f64(in);
    m.options_.knn = static_cast<KnnMethod>(get_u64(in));
    m.options_.dim = dim;

    m.coords_ = Matrix(n, dim);
    for (double& v : m.coords_.data()) {
        v = get_f64(in);
    }
    m.rho_.resize(n);
    m.sigma_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.rho_[i] = get_f64(in);
        m.sigma_[i] = get_f64(in);
    }
    m.features_ = Matrix(n, feat);
    for (double& v : m.features_.data()) {
        v = get_f64(in);
    }
    return m;
}

} // namespace thalparc::manifold
