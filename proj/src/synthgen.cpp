#include "thalparc/synthgen.hpp"

#include "thalparc/config.hpp"
#include "thalparc/error.hpp"
#include "thalparc/manifold/knn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace thalparc::synth {

namespace {

std::size_t round_count(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

bool informative(FeatureGroup g, bool conn) {
    switch (g) {
    case FeatureGroup::base:
    case FeatureGroup::multi_ti: return true;
    case FeatureGroup::conn6:
    case FeatureGroup::conn98: return conn;
    case FeatureGroup::coord: return false;
    }
    return false;
}

std::string subject_name(std::size_t s) {
    std::string id = std::to_string(s + 1);
    return "sub-" + std::string(id.size() < 3 ? 3 - id.size() : 0, '0') + id;
}

using Point = std::array<double, 3>;

double dist2(const Point& a, const Point& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return s;
}

} // namespace

SynthSpec SynthSpec::parse(std::string_view text) {
    SynthSpec spec;
    const auto kv = parse_key_values(text);
    for (const auto& [key, value] : kv) {
        if (key == "n_subjects") spec.n_subjects = parse_size(key, value);
        else if (key == "voxels_per_subject") spec.voxels_per_subject = parse_size(key, value);
        else if (key == "n_clusters") spec.n_clusters = parse_size(key, value);
        else if (key == "groups") spec.groups = FeatureGroupSpec::parse(value);
        else if (key == "separation") spec.separation = parse_real(key, value);
        else if (key == "overlap_fraction") spec.overlap_fraction = parse_real(key, value);
        else if (key == "unlabeled_fraction") spec.unlabeled_fraction = parse_real(key, value);
        else if (key == "informative_connectivity") spec.informative_connectivity = parse_bool(key, value);
        else if (key == "seed") spec.seed = parse_size(key, value);
        else throw Error(ErrorCode::invalid_argument, "unknown synth key '" + key + "'");
    }
    return spec;
}

std::string SynthSpec::to_string() const {
    std::ostringstream out;
    out << "n_subjects=" << n_subjects << '\n'
        << "voxels_per_subject=" << voxels_per_subject << '\n'
        << "n_clusters=" << n_clusters << '\n'
        << "groups=" << groups.to_string() << '\n'
        << "separation=" << format_real(separation) << '\n'
        << "overlap_fraction=" << format_real(overlap_fraction) << '\n'
        << "unlabeled_fraction=" << format_real(unlabeled_fraction) << '\n'
        << "informative_connectivity=" << (informative_connectivity ? "true" : "false") << '\n'
        << "seed=" << seed << '\n';
    return out.str();
}

SynthData generate(const SynthSpec& spec) {
    if (spec.n_clusters == 0 || spec.n_clusters > kNumNuclei) {
        throw Error(ErrorCode::invalid_argument, "n_clusters must be between 1 and 13");
    }
    if (spec.n_subjects == 0 || spec.voxels_per_subject == 0) {
        throw Error(ErrorCode::invalid_argument, "synthetic dataset needs subjects and voxels");
    }
    if (spec.n_clusters > spec.voxels_per_subject) {
        throw Error(ErrorCode::invalid_argument, "more clusters than voxels per subject");
    }
    if (!(spec.separation > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "cluster separation must be positive");
    }
    for (double f : {spec.overlap_fraction, spec.unlabeled_fraction}) {
        if (!(f >= 0.0 && f < 1.0)) {
            throw Error(ErrorCode::invalid_argument, "fractions must lie in [0, 1)");
        }
    }
    const std::size_t total = spec.n_subjects * spec.voxels_per_subject;
    const std::size_t n_unlabeled = round_count(spec.unlabeled_fraction, total);
    const std::size_t n_overlap = round_count(spec.overlap_fraction, total);
    if (n_unlabeled + n_overlap > total || (spec.n_clusters < 2 && n_overlap > 0)) {
        throw Error(ErrorCode::invalid_argument, "overlap and unlabelled counts do not fit the dataset");
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Cell centres of a shared template inside the unit ball.
    std::vector<Point> tmpl(spec.n_clusters);
    for (auto& p : tmpl) {
        do {
            p = {unit(rng), unit(rng), unit(rng)};
        } while (dist2(p, {0.0, 0.0, 0.0}) > 1.0);
    }

    // Ball-shaped mask: the V lattice points nearest the centre of a cube.
    const double radius_guess = std::cbrt(3.0 * static_cast<double>(spec.voxels_per_subject) / (4.0 * M_PI));
    const auto side = static_cast<int>(std::ceil(2.0 * radius_guess)) + 3;
    const double c = 0.5 * (side - 1);
    std::vector<std::pair<double, std::array<int, 3>>> lattice;
    for (int z = 0; z < side; ++z) {
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) {
                lattice.push_back({dist2({x - c, y - c, z - c}, {0, 0, 0}), {x, y, z}});
            }
        }
    }
    std::stable_sort(lattice.begin(), lattice.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    lattice.resize(spec.voxels_per_subject);
    const double radius = std::sqrt(lattice.back().first) + 0.5;

    std::vector<VoxelRecord> records;
    records.reserve(total);
    std::vector<std::size_t> primary(total);
    std::vector<std::size_t> secondary(total);
    std::uniform_int_distribution<int> shift(0, 40);
    for (std::size_t s = 0; s < spec.n_subjects; ++s) {
        const std::array<int, 3> offset{shift(rng), shift(rng), shift(rng)};
        std::vector<Point> seeds(spec.n_clusters);
        for (std::size_t k = 0; k < spec.n_clusters; ++k) {
            for (int a = 0; a < 3; ++a) {
                seeds[k][a] = tmpl[k][a] * radius + 0.1 * radius * normal(rng);
            }
        }
        for (const auto& [d, p] : lattice) {
            const Point pos{p[0] - c, p[1] - c, p[2] - c};
            std::size_t best = 0;
            std::size_t second = 0;
            double bd = std::numeric_limits<double>::infinity();
            double sd = bd;
            for (std::size_t k = 0; k < spec.n_clusters; ++k) {
                const double dk = dist2(pos, seeds[k]);
                if (dk < bd) {
                    second = best;
                    sd = bd;
                    best = k;
                    bd = dk;
                } else if (dk < sd) {
                    second = k;
                    sd = dk;
                }
            }
            const std::size_t idx = records.size();
            primary[idx] = best;
            secondary[idx] = second;
            VoxelRecord rec;
            rec.subject = subject_name(s);
            rec.ijk = {p[0] + offset[0], p[1] + offset[1], p[2] + offset[2]};
            records.push_back(std::move(rec));
        }
    }

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t n = 0; n < total; ++n) {
        auto& labels = records[order[n]].labels;
        if (n < n_unlabeled) {
            continue;
        }
        labels.insert(kScoredNuclei[primary[order[n]]]);
        if (n < n_unlabeled + n_overlap) {
            labels.insert(kScoredNuclei[secondary[order[n]]]);
        }
    }

    std::size_t info_dim = 0;
    for (FeatureGroup g : spec.groups.groups()) {
        info_dim += informative(g, spec.informative_connectivity) ? group_dimension(g) : 0;
    }
    Matrix centroids(spec.n_clusters, info_dim);
    for (double& v : centroids.data()) {
        v = normal(rng);
    }
    if (spec.n_clusters > 1 && info_dim > 0) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < spec.n_clusters; ++a) {
            for (std::size_t b = a + 1; b < spec.n_clusters; ++b) {
                sum += std::sqrt(squared_distance(centroids.row(a), centroids.row(b)));
                ++pairs;
            }
        }
        const double scale = spec.separation / (sum / static_cast<double>(pairs));
        for (double& v : centroids.data()) {
            v *= scale;
        }
    }

    std::map<FeatureGroup, Matrix> features;
    std::uniform_real_distribution<double> col_offset(-5.0, 5.0);
    std::uniform_real_distribution<double> col_scale(0.5, 3.0);
    std::size_t info_col = 0;
    for (FeatureGroup g : spec.groups.groups()) {
        if (g == FeatureGroup::coord) {
            continue;
        }
        const bool signal = informative(g, spec.informative_connectivity);
        Matrix m(total, group_dimension(g));
        for (std::size_t col = 0; col < m.cols(); ++col) {
            const double off = col_offset(rng);
            const double sc = col_scale(rng);
            for (std::size_t r = 0; r < total; ++r) {
                const double mean = signal ? centroids(primary[r], info_col) : 0.0;
                m(r, col) = off + sc * (mean + normal(rng));
            }
            info_col += signal;
        }
        features.emplace(g, std::move(m));
    }

    SynthData out;
    out.dataset = Dataset(std::move(records), std::move(features));
    out.cluster = std::move(primary);
    return out;
}

Blobs gaussian_blobs(std::size_t n_blobs, std::size_t per_blob, std::size_t dim, double center_spread,
                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix centers(n_blobs, dim);
    for (double& v : centers.data()) {
        v = center_spread * normal(rng);
    }
    Blobs out;
    out.points = Matrix(n_blobs * per_blob, dim);
    for (std::size_t b = 0; b < n_blobs; ++b) {
        for (std::size_t p = 0; p < per_blob; ++p) {
            const std::size_t r = b * per_blob + p;
            for (std::size_t d = 0; d < dim; ++d) {
                out.points(r, d) = centers(b, d) + normal(rng);
            }
            out.labels.push_back(static_cast<int>(b));
        }
    }
    return out;
}

namespace {

void check_trust(const Matrix& high, const Matrix& low, std::size_t k) {
    const std::size_t n = high.rows();
    if (low.rows() != n) {
        throw Error(ErrorCode::invalid_argument, "trustworthiness inputs differ in row count");
    }
    if (k == 0 || k >= n || 2 * n <= 3 * k + 1) {
        throw Error(ErrorCode::invalid_argument, "trustworthiness needs 0 < k < N and 3k + 1 < 2N");
    }
}

double trust_penalty_row(const Matrix& high, const Matrix& low, std::size_t k, std::size_t i) {
    const std::size_t n = high.rows();
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
            order.push_back({squared_distance(high.row(i), high.row(j)), j});
        }
    }
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> rank(n, 0);
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank[order[r].second] = r + 1;
    }
    double penalty = 0.0;
    for (const auto& nb : manifold::nearest_neighbors(low, low.row(i), k, static_cast<std::int64_t>(i))) {
        const std::size_t r = rank[nb.index];
        if (r > k) {
            penalty += static_cast<double>(r - k);
        }
    }
    return penalty;
}

double trust_from_penalty(double penalty, std::size_t n, std::size_t k) {
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    return 1.0 - 2.0 / (nn * kk * (2.0 * nn - 3.0 * kk - 1.0)) * penalty;
}

std::vector<int> compact_labels(std::span<const int> labels, std::size_t& n_clusters) {
    std::map<int, int> ids;
    for (int l : labels) {
        ids.emplace(l, 0);
    }
    int next = 0;
    for (auto& [l, id] : ids) {
        id = next++;
    }
    n_clusters = ids.size();
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) {
        out.push_back(ids[l]);
    }
    return out;
}

double silhouette_row(const Matrix& y, const std::vector<int>& lab, const std::vector<std::size_t>& size,
                      std::size_t i) {
    const auto own = static_cast<std::size_t>(lab[i]);
    if (size[own] <= 1) {
        return 0.0;
    }
    std::vector<double> sum(size.size(), 0.0);
    for (std::size_t j = 0; j < y.rows(); ++j) {
        if (j != i) {
            sum[static_cast<std::size_t>(lab[j])] += std::sqrt(squared_distance(y.row(i), y.row(j)));
        }
    }
    const double a = sum[own] / static_cast<double>(size[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < size.size(); ++c) {
        if (c != own && size[c] > 0) {
            b = std::min(b, sum[c] / static_cast<double>(size[c]));
        }
    }
    const double m = std::max(a, b);
    return m > 0.0 ? (b - a) / m : 0.0;
}

std::vector<std::size_t> cluster_sizes(const std::vector<int>& lab, std::size_t n_clusters) {
    std::vector<std::size_t> size(n_clusters, 0);
    for (int l : lab) {
        ++size[static_cast<std::size_t>(l)];
    }
    return size;
}

} // namespace

namespace kernels {

double trustworthiness_serial(const Matrix& high, const Matrix& low, std::size_t k) {
    check_trust(high, low, k);
    double penalty = 0.0;
    for (std::size_t i = 0; i < high.rows(); ++i) {
        penalty += trust_penalty_row(high, low, k, i);
    }
    return trust_from_penalty(penalty, high.rows(), k);
}

double trustworthiness_omp(const Matrix& high, const Matrix& low, std::size_t k) {
    check_trust(high, low, k);
    double penalty = 0.0;
    const auto n = static_cast<std::int64_t>(high.rows());
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : penalty)
    for (std::int64_t i = 0; i < n; ++i) {
        penalty += trust_penalty_row(high, low, k, static_cast<std::size_t>(i));
    }
    return trust_from_penalty(penalty, high.rows(), k);
}

double silhouette_serial(const Matrix& y, std::span<const int> labels) {
    if (labels.size() != y.rows()) {
        throw Error(ErrorCode::invalid_argument, "silhouette inputs differ in length");
    }
    std::size_t n_clusters = 0;
    const auto lab = compact_labels(labels, n_clusters);
    if (n_clusters < 2) {
        throw Error(ErrorCode::invalid_argument, "silhouette needs at least two clusters");
    }
    const auto size = cluster_sizes(lab, n_clusters);
    double total = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i) {
        total += silhouette_row(y, lab, size, i);
    }
    return total / static_cast<double>(y.rows());
}

double silhouette_omp(const Matrix& y, std::span<const int> labels) {
    if (labels.size() != y.rows()) {
        throw Error(ErrorCode::invalid_argument, "silhouette inputs differ in length");
    }
    std::size_t n_clusters = 0;
    const auto lab = compact_labels(labels, n_clusters);
    if (n_clusters < 2) {
        throw Error(ErrorCode::invalid_argument, "silhouette needs at least two clusters");
    }
    const auto size = cluster_sizes(lab, n_clusters);
    std::vector<double> per_row(y.rows());
    const auto n = static_cast<std::int64_t>(y.rows());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        per_row[static_cast<std::size_t>(i)] = silhouette_row(y, lab, size, static_cast<std::size_t>(i));
    }
    return std::accumulate(per_row.begin(), per_row.end(), 0.0) / static_cast<double>(y.rows());
}

} // namespace kernels

double trustworthiness(const Matrix& high, const Matrix& low, std::size_t k, Execution exec) {
    return exec == Execution::parallel ? kernels::trustworthiness_omp(high, low, k)
                                       : kernels::trustworthiness_serial(high, low, k);
}

double silhouette(const Matrix& y, std::span<const int> labels, Execution exec) {
    return exec == Execution::parallel ? kernels::silhouette_omp(y, labels)
                                       : kernels::silhouette_serial(y, labels);
}

} // namespace thalparc::synth
