// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "cli.hpp"

#include "thalparc/config.hpp"
#include "thalparc/error.hpp"
#include "thalparc/evaluation.hpp"
#include "thalparc/latent_classifier.hpp"
#include "thalparc/manifold/embedding.hpp"
#include "thalparc/manifold/fuzzy_graph.hpp"
#include "thalparc/manifold/knn_graph.hpp"
#include "thalparc/normalizer.hpp"
#include "thalparc/pipeline.hpp"
#include "thalparc/synthgen.hpp"
#include "thalparc/tensor_features.hpp"
#include "thalparc/tsv.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

using namespace thalparc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d: %s  %s [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

void guarded(int id, const std::string& what, const std::function<std::pair<bool, std::string>()>& body) {
    const auto t0 = Clock::now();
    try {
        auto [pass, detail] = body();
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
        report(id, pass, what, detail + "; " + tsv::format_fixed(sec, 1) + " s");
    } catch (const std::exception& e) {
        report(id, false, what, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v, int digits = 4) { return tsv::format_fixed(v, digits); }

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "thalparc");
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    if (status != 0) {
        throw std::runtime_error("thalparc " + args[1] + " failed: " + err.str());
    }
    return status;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> read_summary(const fs::path& p) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : parse_key_values(slurp(p))) out[k] = v;
    return out;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Criterion 1 dataset: 13 clusters, 25 subjects (5 per fold), 63 columns.
synth::SynthSpec end_to_end_spec() {
    synth::SynthSpec s;
    s.n_subjects = 25;
    s.voxels_per_subject = 200;
    s.n_clusters = 13;
    s.separation = 8.0;
    s.overlap_fraction = 0.05;
    s.groups = FeatureGroupSpec{FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti};
    return s;
}

std::vector<std::string> synth_sets(const synth::SynthSpec& s) {
    std::vector<std::string> args;
    for (const auto& [k, v] : parse_key_values(s.to_string())) {
        args.push_back("--set");
        args.push_back(k + "=" + v);
    }
    return args;
}

} // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "thalparc_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    guarded(1, "synthetic end-to-end crossval, d=2, overall Dice >= 0.90 every fold, <= 600 s", [&] {
        const auto t0 = Clock::now();
        auto args = synth_sets(end_to_end_spec());
        args.insert(args.begin(), "synth");
        args.insert(args.end(), {"--output-dir", (work / "c1").string()});
        run_cli(args);
        run_cli({"crossval", "--data", (work / "c1/synth.tsv").string(), "--dim", "2", "--n-neighbors", "auto",
             "--deterministic", "--seed", "0", "--output-dir", (work / "c1/cv").string()});
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
        const auto summary = read_summary(work / "c1/cv/summary.txt");
        bool pass = sec <= 600.0;
        std::string detail = "folds";
        for (int f = 1; f <= 5; ++f) {
            const double v = parse_real("overall", summary.at("fold" + std::to_string(f) + ".overall"));
            pass = pass && v >= 0.90;
            detail += " " + fmt(v);
        }
        return std::pair{pass, detail + "; wall " + fmt(sec, 1) + " s"};
    });

    guarded(2, "separation 3: mean Dice(d=4) >= mean Dice(d=2) - 0.01 over 5 seeds", [&] {
        std::vector<double> d2, d4;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto spec = end_to_end_spec();
            spec.separation = 3.0;
            spec.seed = seed;
            const auto data = synth::generate(spec).dataset;
            for (std::size_t dim : {2u, 4u}) {
                PipelineConfig c;
                c.umap.dim = dim;
                // Shortened layout schedule to bound the ten cross-validations.
                c.umap.epochs = 200;
                c.seed = seed;
                (dim == 2 ? d2 : d4).push_back(run_crossval(data, c).overall.mean);
            }
        }
        const double m2 = mean_of(d2), m4 = mean_of(d4);
        return std::pair{m4 >= m2 - 0.01, "d=2 " + fmt(m2) + ", d=4 " + fmt(m4) + " (200 epochs)"};
    });

    guarded(3, "smooth-kNN calibration residual <= 1e-5 on 1000 rows; worked sigma within 1e-3", [&] {
        std::mt19937_64 rng(3);
        std::gamma_distribution<double> gap(1.5, 0.7);
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const std::size_t k = 2 + rng() % 200;
            std::vector<double> d(k);
            double acc = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
            for (double& x : d) x = (acc += gap(rng));
            const auto s = manifold::calibrate_smooth_knn(d, k);
            double sum = 0;
            for (double x : d) sum += std::exp(-std::max(0.0, x - s.rho) / s.sigma);
            worst = std::max(worst, std::abs(sum - std::log2(static_cast<double>(k))));
        }
        // Root of 1 + e^(-1/s) + e^(-2/s) + e^(-3/s) = 2 by an independent Brent solve.
        const double oracle = 1.6410179299284884;
        const double sigma = manifold::calibrate_smooth_knn(std::vector<double>{1, 2, 3, 4}, 4).sigma;
        const bool pass = worst <= 1e-5 && std::abs(sigma - oracle) <= 1e-3 && std::abs(sigma - 1.6406) <= 1e-3;
        return std::pair{pass, "worst residual " + tsv::format_double(worst) + ", sigma " + fmt(sigma, 6)};
    });

    guarded(4, "classify_points matches quadratic-scan voting oracle on 1000 queries", [&] {
        std::mt19937_64 rng(4);
        std::uniform_int_distribution<int> lattice(-4, 4);
        Matrix coords(400, 3);
        std::vector<LabelSet> labels;
        std::size_t multi = 0;
        for (std::size_t i = 0; i < coords.rows(); ++i) {
            for (std::size_t c = 0; c < 3; ++c) coords(i, c) = lattice(rng);
            LabelSet l;
            l.insert(kScoredNuclei[rng() % 5]);
            if (rng() % 3 == 0) l.insert(kScoredNuclei[rng() % 13]);
            multi += l.size() > 1;
            labels.push_back(l);
        }
        // Engineered ties: a query with symmetric neighbours of different labels.
        Matrix queries(1000, 3);
        for (double& v : queries.data()) v = lattice(rng) * 0.5;
        const LabeledLatentSet set(coords, labels);
        std::size_t agree = 0, total = 0, tied = 0;
        for (std::size_t k : {1u, 7u, 50u}) {
            const auto votes = classify_points(queries, set, k, Execution::parallel);
            for (std::size_t q = 0; q < queries.rows(); ++q) {
                std::vector<std::pair<double, std::size_t>> order;
                for (std::size_t i = 0; i < coords.rows(); ++i) {
                    order.push_back({squared_distance(coords.row(i), queries.row(q)), i});
                }
                std::sort(order.begin(), order.end());
                std::array<long long, kNumLabelCodes> num{};  // over the common denominator 12
                std::array<double, kNumLabelCodes> dist{};
                std::array<int, kNumLabelCodes> hits{};
                for (std::size_t n = 0; n < k; ++n) {
                    const auto members = labels[order[n].second].members();
                    for (Nucleus m : members) {
                        num[index_of(m)] += 12 / static_cast<long long>(members.size());
                        dist[index_of(m)] += std::sqrt(order[n].first);
                        ++hits[index_of(m)];
                    }
                }
                int best = -1;
                bool tie = false;
                for (int c = 0; c < static_cast<int>(kNumLabelCodes); ++c) {
                    if (!hits[c]) continue;
                    if (best < 0) {
                        best = c;
                        continue;
                    }
                    if (num[c] == num[best]) tie = true;
                    if (num[c] > num[best] ||
                        (num[c] == num[best] && dist[c] / hits[c] < dist[best] / hits[best])) {
                        best = c;
                    }
                }
                tied += tie;
                agree += votes[q].winner == static_cast<Nucleus>(best);
                ++total;
            }
        }
        return std::pair{agree == total, std::to_string(agree) + "/" + std::to_string(total) + " agree, " +
                                             std::to_string(multi) + " multi-label points, " +
                                             std::to_string(tied) + " equal-weight label pairs"};
    });

    guarded(5, "NN-descent recall >= 0.95 vs exact (5k points, 20 clusters, 3 seeds)", [&] {
        bool pass = true;
        std::string detail;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto b = synth::gaussian_blobs(20, 250, 10, 3.0, seed);
            const auto exact = manifold::knn_graph_exact(b.points, 15);
            const double r = manifold::graph_recall(manifold::knn_graph_approx(b.points, 15, seed), exact);
            pass = pass && r >= 0.95;
            detail += (seed ? ", " : "recall ") + fmt(r);
        }
        // The end-to-end dataset as well, after scaling.
        const auto data = synth::generate(end_to_end_spec()).dataset;
        const auto groups = end_to_end_spec().groups;
        const auto raw = select_features(data, groups);
        const auto x = RobustScaler::fit(raw, groups.directional()).transform(raw);
        const double r = manifold::graph_recall(manifold::knn_graph_approx(x, 15, 1),
                                                manifold::knn_graph_exact(x, 15, Execution::parallel));
        pass = pass && r >= 0.95;
        return std::pair{pass, detail + "; end-to-end features " + fmt(r)};
    });

    guarded(6, "normalizer bounds, monotonicity, breakpoints, degenerate and shifted columns", [&] {
        std::mt19937_64 rng(6);
        std::lognormal_distribution<double> heavy(0.0, 1.2);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::size_t violations = 0;
        for (int t = 0; t < 1000; ++t) {
            const std::size_t n = 10 + rng() % 300;
            Matrix col(n, 1);
            for (double& v : col.data()) v = (t % 2 ? heavy(rng) : normal(rng)) * 10.0;
            const auto s = RobustScaler::fit(col, {false});
            const auto& c = s.column(0);
            violations += c.apply(c.p_lo) != 0.025 || c.apply(c.p_hi) != 0.975;
            violations += c.apply(c.min) != 0.0 || c.apply(c.max) != 1.0;
            auto sorted = col.data();
            std::sort(sorted.begin(), sorted.end());
            double prev = -1;
            for (double v : sorted) {
                const double y = c.apply(v);
                violations += y < 0.0 || y > 1.0 || y < prev;
                prev = y;
            }
            // Shifted test data.
            for (int q = 0; q < 20; ++q) {
                const double y = c.apply(sorted.back() + 10.0 * normal(rng) + 5.0);
                violations += y < 0.0 || y > 1.0;
            }
        }
        Matrix constant(50, 2, 3.0);
        const auto ds = RobustScaler::fit(constant, {false, true});
        const auto y = ds.transform(constant);
        for (std::size_t r = 0; r < y.rows(); ++r) violations += y(r, 0) != 0.5 || y(r, 1) != 0.0;
        return std::pair{violations == 0, std::to_string(violations) + " violations"};
    });

    guarded(7, "tensor features: FA bounds and scale invariance, Knutsson norm and symmetry, FA(2,1,1)", [&] {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> g(0.0, 1.0);
        std::uniform_real_distribution<double> scale(1e-3, 1e3);
        std::size_t bad = 0;
        for (int t = 0; t < 10000; ++t) {
            double a[3][3];
            for (auto& row : a)
                for (double& v : row) v = g(rng);
            double m[3][3]{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) m[i][j] += a[i][k] * a[j][k];
            const tensor::DiffusionTensor d{m[0][0], m[1][1], m[2][2], m[0][1], m[0][2], m[1][2]};
            const double c = scale(rng);
            const tensor::DiffusionTensor dc{d.dxx * c, d.dyy * c, d.dzz * c, d.dxy * c, d.dxz * c, d.dyz * c};
            const double fa = tensor::scalar_maps(tensor::eigen_decompose(d)).fa;
            const double fc = tensor::scalar_maps(tensor::eigen_decompose(dc)).fa;
            bad += fa < 0.0 || fa > 1.0 || std::abs(fa - fc) > 1e-9;
        }
        double worst_norm = 0;
        for (int t = 0; t < 1000; ++t) {
            const tensor::Vec3 v{g(rng), g(rng), g(rng)};
            const auto k1 = tensor::knutsson_map(v);
            const auto k2 = tensor::knutsson_map({-v[0], -v[1], -v[2]});
            double n2 = 0;
            for (int c = 0; c < 5; ++c) {
                n2 += k1[c] * k1[c];
                bad += k1[c] != k2[c];
            }
            worst_norm = std::max(worst_norm, std::abs(std::sqrt(n2) - 2.0 / std::sqrt(3.0)));
        }
        const double fa211 = tensor::scalar_maps(tensor::eigen_decompose({2, 1, 1, 0, 0, 0})).fa;
        const bool pass = bad == 0 && worst_norm <= 1e-9 && std::abs(fa211 - 0.40825) <= 1e-5;
        return std::pair{pass, std::to_string(bad) + " violations, norm error " + tsv::format_double(worst_norm) +
                                   ", FA(2,1,1) " + fmt(fa211, 6)};
    });

    guarded(8, "Dice examples exact; volume-weighted 0.7; ablation aggregation within 1e-12", [&] {
        bool pass = true;
        // Perfect agreement.
        std::vector<Nucleus> pred;
        std::vector<LabelSet> truth;
        for (Nucleus n : kScoredNuclei) {
            pred.push_back(n);
            LabelSet s;
            s.insert(n);
            truth.push_back(s);
        }
        const auto perfect = per_nucleus_dice(pred, truth);
        for (double d : perfect.dice) pass = pass && d == 1.0;
        // Multi-label truth voxel.
        const auto ml = per_nucleus_dice(std::vector<Nucleus>{Nucleus::MD},
                                         std::vector<LabelSet>{parse_label_set("MD;CL")});
        pass = pass && ml.dice[index_of(Nucleus::MD)] == 1.0 && ml.truth_volume[index_of(Nucleus::CL)] == 1 &&
               ml.dice[index_of(Nucleus::CL)] == 0.0;
        // Randomised instance against an exhaustive set scan.
        std::mt19937_64 rng(8);
        for (int t = 0; t < 100; ++t) {
            std::vector<Nucleus> p(60);
            std::vector<LabelSet> g(60);
            for (std::size_t v = 0; v < 60; ++v) {
                p[v] = kScoredNuclei[rng() % 4];
                g[v].insert(kScoredNuclei[rng() % 4]);
                if (rng() % 5 == 0) g[v].insert(kScoredNuclei[rng() % 4]);
            }
            const auto d = per_nucleus_dice(p, g);
            for (std::size_t c = 0; c < 4; ++c) {
                std::size_t inter = 0, np = 0, ng = 0;
                for (std::size_t v = 0; v < 60; ++v) {
                    const bool a = p[v] == kScoredNuclei[c], b = g[v].contains(kScoredNuclei[c]);
                    np += a;
                    ng += b;
                    inter += a && b;
                }
                pass = pass && d.dice[c] == (np + ng ? 2.0 * inter / (np + ng) : 1.0);
            }
        }
        const double weighted = overall_dice(std::vector<double>{0.8, 0.4}, std::vector<double>{3, 1});
        // 0.8 and 0.4 are stored above their decimal values, so the exact result
        // rounds one ulp above the double nearest 0.7.
        const double exact =
            static_cast<double>((3 * static_cast<__float128>(0.8) + static_cast<__float128>(0.4)) / 4);
        pass = pass && weighted == exact && tsv::format_fixed(weighted, 15) == "0.700000000000000";
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            std::vector<DiceRow> rows(2 + rng() % 9);
            long double sum = 0;
            for (auto& r : rows) {
                r.overall = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                sum += r.overall;
            }
            const long double mean = sum / rows.size();
            long double var = 0;
            for (const auto& r : rows) var += (r.overall - mean) * (r.overall - mean);
            const auto a = aggregate_ablation(rows, FeatureGroupSpec{FeatureGroup::base});
            worst = std::max({worst, std::abs(a.overall.mean - static_cast<double>(mean)),
                              std::abs(a.overall.std - static_cast<double>(std::sqrt(var / rows.size())))});
        }
        pass = pass && worst <= 1e-12;
        return std::pair{pass, "weighted " + tsv::format_double(weighted) + ", aggregation error " +
                                   tsv::format_double(worst)};
    });

    guarded(9, "crossval --deterministic --seed 7 twice: byte-identical reports and models", [&] {
        auto spec = end_to_end_spec();
        spec.n_subjects = 10;
        spec.voxels_per_subject = 100;
        spec.seed = 9;
        auto args = synth_sets(spec);
        args.insert(args.begin(), "synth");
        args.insert(args.end(), {"--output-dir", (work / "c9").string()});
        run_cli(args);
        for (const char* run : {"a", "b"}) {
            run_cli({"crossval", "--data", (work / "c9/synth.tsv").string(), "--deterministic", "--seed", "7",
                 "--output-dir", (work / "c9" / run).string()});
        }
        std::size_t compared = 0, differ = 0;
        for (const auto& e : fs::recursive_directory_iterator(work / "c9/a")) {
            if (!e.is_regular_file()) continue;
            const auto rel = fs::relative(e.path(), work / "c9/a");
            ++compared;
            differ += slurp(e.path()) != slurp(work / "c9/b" / rel);
        }
        return std::pair{compared >= 18 && differ == 0,
                         std::to_string(compared) + " artifacts compared, " + std::to_string(differ) + " differ"};
    });

    guarded(10, "embedding quality: trustworthiness(15) >= 0.90 and > random projection; silhouette >= 0.8", [&] {
        bool pass = true;
        double min_trust = 1, max_base = 0, min_sil = 1;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto b = synth::gaussian_blobs(10, 100, 20, 10.0, seed);
            manifold::UmapOptions o;
            o.seed = seed;
            const auto model = manifold::EmbeddingModel::fit(b.points, o);
            const double trust = synth::trustworthiness(b.points, model.coords(), 15);
            std::mt19937_64 rng(seed + 1000);
            std::normal_distribution<double> g(0.0, 1.0);
            Matrix proj(b.points.cols(), 2);
            for (double& v : proj.data()) v = g(rng);
            Matrix low(b.points.rows(), 2);
            for (std::size_t r = 0; r < low.rows(); ++r)
                for (std::size_t c = 0; c < 2; ++c)
                    for (std::size_t d = 0; d < b.points.cols(); ++d) low(r, c) += b.points(r, d) * proj(d, c);
            const double base = synth::trustworthiness(b.points, low, 15);
            const double sil = synth::silhouette(model.coords(), b.labels);
            pass = pass && trust >= 0.90 && trust > base && sil >= 0.8;
            min_trust = std::min(min_trust, trust);
            max_base = std::max(max_base, base);
            min_sil = std::min(min_sil, sil);
        }
        return std::pair{pass, "min trust " + fmt(min_trust) + ", max baseline " + fmt(max_base) +
                                   ", min silhouette " + fmt(min_sil)};
    });

    guarded(11, "ablate emits seven rows 19/22/60/63/69/161/104 in table layout; golden formatting", [&] {
        auto spec = end_to_end_spec();
        spec.n_subjects = 6;
        spec.voxels_per_subject = 60;
        spec.n_clusters = 5;
        spec.groups = FeatureGroupSpec::all();
        auto args = synth_sets(spec);
        args.insert(args.begin(), "synth");
        args.insert(args.end(), {"--output-dir", (work / "c11").string()});
        run_cli(args);
        run_cli({"ablate", "--data", (work / "c11/synth.tsv").string(), "--folds", "3", "--epochs", "20", "--k", "10",
             "--deterministic", "--output-dir", (work / "c11/ab").string()});
        std::istringstream table(slurp(work / "c11/ab/ablation.tsv"));
        std::string line;
        std::getline(table, line);
        bool pass = line == "Dim.\tBase\tCoord\tMulti-TI\tConn6\tConn98\tMean ± Std. Dev.";
        std::vector<std::string> dims;
        while (std::getline(table, line)) dims.push_back(line.substr(0, line.find('\t')));
        pass = pass && dims == std::vector<std::string>{"19", "22", "60", "63", "69", "161", "104"};

        std::vector<AblationRow> injected{
            {FeatureGroupSpec{FeatureGroup::base}, 19, {0.632, 0.011}},
            {FeatureGroupSpec{FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti}, 63, {0.644, 0.017}}};
        const std::string golden = "Dim.\tBase\tCoord\tMulti-TI\tConn6\tConn98\tMean ± Std. Dev.\n"
                                   "19\t✓\t\t\t\t\t0.632 ± 0.011\n"
                                   "63\t✓\t✓\t✓\t\t\t0.644 ± 0.017\n";
        pass = pass && ablation_table_tsv(injected) == golden;

        EvaluationReport r;
        r.folds.resize(1);
        r.folds[0].fold = 1;
        const auto fold = fold_table_tsv(r);
        pass = pass && fold.substr(0, fold.find('\n')) ==
                           "Label\tOverall\tAN\tCL\tCM\tLD\tLP\tMD\tPuA\tPuI\tVA\tVLP\tVLa\tVPL\tVPM";
        std::string joined;
        for (const auto& d : dims) joined += (joined.empty() ? "" : "/") + d;
        return std::pair{pass, "rows " + joined};
    });

    guarded(12, "noise connectivity: mean Dice(63 columns) >= mean Dice(161 columns) - 0.02", [&] {
        auto spec = end_to_end_spec();
        spec.groups = FeatureGroupSpec::all();
        spec.informative_connectivity = false;
        spec.seed = 12;
        const auto data = synth::generate(spec).dataset;
        PipelineConfig c;
        // Shortened layout schedule, as in criterion 2.
        c.umap.epochs = 200;
        c.seed = 12;
        const std::vector<FeatureGroupSpec> subsets{
            FeatureGroupSpec{FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti},
            FeatureGroupSpec{FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti, FeatureGroup::conn98}};
        const auto rows = run_ablation(data, c, subsets);
        const double m63 = rows[0].overall.mean, m161 = rows[1].overall.mean;
        return std::pair{rows[0].dimension == 63 && rows[1].dimension == 161 && m63 >= m161 - 0.02,
                         "63: " + fmt(m63) + ", 161: " + fmt(m161) + " (200 epochs)"};
    });

    fs::remove_all(work);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures;
}
