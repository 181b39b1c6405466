#include "thalparc/pipeline.hpp"

#include "thalparc/error.hpp"
#include "thalparc/tsv.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace thalparc {

namespace {

template <class F>
auto with_fold_context(std::size_t fold, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code(), "fold " + std::to_string(fold) + ": " + e.what());
    }
}

std::vector<LabelSet> labels_of(const Dataset& dataset, std::span<const std::size_t> rows) {
    std::vector<LabelSet> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        out.push_back(dataset.record(r).labels);
    }
    return out;
}

} // namespace

std::size_t resolve_k(const PipelineConfig& config) {
    return config.k != 0 ? config.k : default_k(config.umap.dim);
}

TrainedPipeline fit_pipeline(const Dataset& dataset, std::span<const std::size_t> train_rows,
                             const PipelineConfig& config, std::uint64_t seed,
                             const RobustScaler* scaler_override) {
    TrainedPipeline out;
    out.rows.assign(train_rows.begin(), train_rows.end());
    const Matrix raw = select_features(dataset, config.groups, train_rows);
    out.scaler = scaler_override
                     ? *scaler_override
                     : RobustScaler::fit(raw, config.groups.directional(), config.groups.column_names());
    auto options = config.umap;
    options.seed = seed;
    options.exec = config.exec;
    out.model = manifold::EmbeddingModel::fit(out.scaler.transform(raw), options);
    return out;
}

EvaluationReport run_crossval(const Dataset& dataset, const PipelineConfig& config,
                              const FoldObserver& observer) {
    EvaluationReport report;
    report.groups = config.groups;
    report.dim = config.umap.dim;
    report.k = resolve_k(config);
    const auto subjects = dataset.subjects();
    report.plan = make_folds(subjects, config.folds, config.seed);

    RobustScaler global_scaler;
    if (!config.normalize_per_fold) {
        global_scaler = RobustScaler::fit(select_features(dataset, config.groups),
                                          config.groups.directional(), config.groups.column_names());
    }

    for (std::size_t f = 0; f < report.plan.n_folds; ++f) {
        const std::size_t fold = f + 1;
        const auto& test_subjects = report.plan.folds[f];
        const auto train_subjects = report.plan.training_subjects(f);
        {
            const std::set<std::string> a(test_subjects.begin(), test_subjects.end());
            for (const auto& s : train_subjects) {
                if (a.contains(s)) {
                    throw Error(ErrorCode::invalid_argument,
                                "fold " + std::to_string(fold) + ": subject " + s + " in train and test");
                }
            }
        }

        const auto train_rows = dataset.rows_of_subjects(train_subjects);
        std::vector<std::size_t> test_rows;
        for (std::size_t r : dataset.rows_of_subjects(test_subjects)) {
            if (!dataset.record(r).labels.scored().empty()) {
                test_rows.push_back(r);
            }
        }

        with_fold_context(fold, [&] {
            const auto trained = fit_pipeline(dataset, train_rows, config, config.seed + f,
                                              config.normalize_per_fold ? nullptr : &global_scaler);
            const Matrix test_x = trained.scaler.transform(select_features(dataset, config.groups, test_rows));
            Matrix test_latent = trained.model.transform(test_x, config.exec);

            const auto train_labels = labels_of(dataset, train_rows);
            const LabeledLatentSet labeled(trained.model.coords(), train_labels, {}, config.keep_conflicted);
            auto votes = classify_points(test_latent, labeled, report.k, config.exec);

            std::vector<Nucleus> predicted;
            predicted.reserve(votes.size());
            for (const auto& v : votes) {
                predicted.push_back(v.winner);
            }
            const auto truth = labels_of(dataset, test_rows);
            DiceRow row;
            row.fold = fold;
            row.scores = per_nucleus_dice(predicted, truth);
            row.overall = overall_dice(row.scores);
            report.folds.push_back(row);

            if (observer) {
                FoldOutput out;
                out.fold = fold;
                out.trained = &trained;
                out.test_rows = test_rows;
                out.test_latent = std::move(test_latent);
                out.votes = std::move(votes);
                observer(out);
            }
            return 0;
        });
    }

    std::vector<double> overall;
    for (const auto& r : report.folds) {
        overall.push_back(r.overall);
    }
    report.overall = mean_std(overall);
    for (std::size_t c = 0; c < kNumNuclei; ++c) {
        std::vector<double> v;
        for (const auto& r : report.folds) {
            v.push_back(r.scores.dice[c]);
        }
        report.per_nucleus[c] = mean_std(v);
    }
    return report;
}

std::vector<FeatureGroupSpec> ablation_subsets() {
    using G = FeatureGroup;
    return {
        FeatureGroupSpec{G::base},
        FeatureGroupSpec{G::base, G::coord},
        FeatureGroupSpec{G::base, G::multi_ti},
        FeatureGroupSpec{G::base, G::coord, G::multi_ti},
        FeatureGroupSpec{G::base, G::coord, G::multi_ti, G::conn6},
        FeatureGroupSpec{G::base, G::coord, G::multi_ti, G::conn98},
        FeatureGroupSpec{G::conn6, G::conn98},
    };
}

std::vector<AblationRow> run_ablation(const Dataset& dataset, const PipelineConfig& config,
                                      std::span<const FeatureGroupSpec> subsets,
                                      std::vector<EvaluationReport>* reports) {
    std::vector<AblationRow> rows;
    for (const auto& subset : subsets) {
        auto c = config;
        c.groups = subset;
        auto report = run_crossval(dataset, c);
        rows.push_back(aggregate_ablation(report.folds, subset));
        if (reports) {
            reports->push_back(std::move(report));
        }
    }
    return rows;
}

std::string fold_table_tsv(const EvaluationReport& report) {
    std::ostringstream out;
    out << "Label\tOverall";
    for (Nucleus n : kReportOrder) {
        out << '\t' << nucleus_code(n);
    }
    out << '\n';
    for (const auto& row : report.folds) {
        out << "Fold " << row.fold << '\t' << tsv::format_fixed(row.overall, 2);
        for (Nucleus n : kReportOrder) {
            out << '\t' << tsv::format_fixed(row.scores.dice[index_of(n)], 2);
        }
        out << '\n';
    }
    return out.str();
}

std::string summary_text(const EvaluationReport& report) {
    std::ostringstream out;
    out << "groups=" << report.groups.to_string() << '\n';
    out << "dimension=" << report.groups.dimension() << '\n';
    out << "latent_dim=" << report.dim << '\n';
    out << "k=" << report.k << '\n';
    out << "folds=" << report.plan.n_folds << '\n';
    for (std::size_t f = 0; f < report.plan.folds.size(); ++f) {
        out << "fold" << f + 1 << ".subjects=";
        for (std::size_t s = 0; s < report.plan.folds[f].size(); ++s) {
            out << (s ? "," : "") << report.plan.folds[f][s];
        }
        out << '\n';
    }
    for (const auto& row : report.folds) {
        out << "fold" << row.fold << ".overall=" << tsv::format_double(row.overall) << '\n';
        out << "fold" << row.fold << ".evaluated=" << row.scores.evaluated << '\n';
        for (Nucleus n : kReportOrder) {
            out << "fold" << row.fold << '.' << nucleus_code(n) << '='
                << tsv::format_double(row.scores.dice[index_of(n)]) << '\n';
        }
    }
    out << "overall.mean=" << tsv::format_double(report.overall.mean) << '\n';
    out << "overall.std=" << tsv::format_double(report.overall.std) << '\n';
    for (Nucleus n : kReportOrder) {
        out << nucleus_code(n) << ".mean=" << tsv::format_double(report.per_nucleus[index_of(n)].mean) << '\n';
    }
    return out.str();
}

std::string ablation_table_tsv(std::span<const AblationRow> rows) {
    std::ostringstream out;
    out << "Dim.";
    for (FeatureGroup g : kAllGroups) {
        out << '\t' << group_heading(g);
    }
    out << "\tMean ± Std. Dev.\n";
    for (const auto& row : rows) {
        out << row.dimension;
        for (FeatureGroup g : kAllGroups) {
            out << '\t' << (row.groups.contains(g) ? "✓" : "");
        }
        out << '\t' << tsv::format_fixed(row.overall.mean, 3) << " ± "
            << tsv::format_fixed(row.overall.std, 3) << '\n';
    }
    return out.str();
}

} // namespace thalparc
