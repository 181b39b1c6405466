#include "cli.hpp"

#include "output_stage.hpp"
#include "run_config.hpp"
#include "svg_plot.hpp"

#include "thalparc/error.hpp"
#include "thalparc/pipeline.hpp"
#include "thalparc/synthgen.hpp"
#include "thalparc/tensor_features.hpp"
#include "thalparc/tsv.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace thalparc::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kOutDirEnv = "THALPARC_OUT_DIR";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string default_output_dir() {
    const char* env = std::getenv(kOutDirEnv.data());
    return env && *env ? env : ".";
}

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

/// Reads a table with a header row into column-name -> index and rows.
struct Table {
    std::map<std::string, std::size_t, std::less<>> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name, const std::string& source) const {
        const auto it = columns.find(name);
        if (it == columns.end()) {
            throw Error(ErrorCode::schema, source + ": missing column '" + std::string(name) + "'");
        }
        return it->second;
    }
};

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open " + path);
    }
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::schema, path + ": empty table");
    }
    const auto header = tsv::split(tsv::chomp(line));
    for (std::size_t c = 0; c < header.size(); ++c) {
        t.columns.emplace(std::string(header[c]), c);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = tsv::chomp(line);
        if (view.empty()) {
            continue;
        }
        const auto fields = tsv::split(view);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::data, path + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(header.size()) + " fields");
        }
        t.rows.emplace_back(fields.begin(), fields.end());
    }
    return t;
}

double number_at(const Table& t, std::size_t row, std::size_t col, const std::string& source) {
    double v = 0.0;
    if (!tsv::parse_double(t.rows[row][col], v) || !std::isfinite(v)) {
        throw Error(ErrorCode::data, source + ": row " + std::to_string(row + 1) + ": bad number '" +
                                         t.rows[row][col] + "'");
    }
    return v;
}

std::int32_t int_at(const Table& t, std::size_t row, std::size_t col, const std::string& source) {
    long long v = 0;
    if (!tsv::parse_int(t.rows[row][col], v)) {
        throw Error(ErrorCode::data, source + ": row " + std::to_string(row + 1) + ": bad integer '" +
                                         t.rows[row][col] + "'");
    }
    return static_cast<std::int32_t>(v);
}

std::string latent_tsv(const Dataset& dataset, std::span<const std::size_t> rows, const Matrix& latent) {
    std::ostringstream out;
    out << "subject\ti\tj\tk";
    for (std::size_t d = 0; d < latent.cols(); ++d) {
        out << "\tz" << d + 1;
    }
    out << "\tlabels\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& rec = dataset.record(rows[r]);
        out << rec.subject << '\t' << rec.ijk[0] << '\t' << rec.ijk[1] << '\t' << rec.ijk[2];
        for (double v : latent.row(r)) {
            out << '\t' << tsv::format_double(v);
        }
        out << '\t' << format_label_set(rec.labels) << '\n';
    }
    return out.str();
}

std::string predictions_tsv(const Dataset& dataset, std::span<const std::size_t> rows,
                            std::span<const VoteResult> votes) {
    std::ostringstream out;
    out << "subject\ti\tj\tk\tpredicted_label\trank1\tweight1\trank2\tweight2\trank3\tweight3\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& rec = dataset.record(rows[r]);
        out << rec.subject << '\t' << rec.ijk[0] << '\t' << rec.ijk[1] << '\t' << rec.ijk[2] << '\t'
            << nucleus_code(votes[r].winner);
        const auto ranking = votes[r].ranking();
        for (std::size_t i = 0; i < 3; ++i) {
            if (i < ranking.size()) {
                out << '\t' << nucleus_code(ranking[i]) << '\t'
                    << tsv::format_double(votes[r].weight(ranking[i]));
            } else {
                out << "\t\t";
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string serialize_model(const manifold::EmbeddingModel& model) {
    std::ostringstream out(std::ios::binary);
    model.write(out);
    return out.str();
}

std::string serialize_scaler(const RobustScaler& scaler) {
    std::ostringstream out;
    scaler.write_tsv(out);
    return out.str();
}

std::vector<std::size_t> all_rows(const Dataset& dataset) {
    std::vector<std::size_t> rows(dataset.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i] = i;
    }
    return rows;
}

Dataset load_for(const RunConfig& config) {
    if (config.data.empty()) {
        throw Error(ErrorCode::invalid_argument, "no dataset given (--data or data= in --config)");
    }
    return load_dataset(config.data, config.groups);
}

/// Flags shared by the modelling commands. Values are kept as text and
/// applied on top of the --config file so that overrides win.
struct ConfigFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
    bool deterministic = false;
    std::string output_dir;

    void add_to(CLI::App* app, bool with_folds) {
        app->add_option("--config", config_file, "key=value configuration file");
        app->add_option("--output-dir", output_dir, "Artifact directory (default $THALPARC_OUT_DIR or .)");
        app->add_flag("--deterministic", deterministic, "Sequential, bit-reproducible execution");
        option(app, "--data", "data", "Feature table (TSV)");
        option(app, "--groups", "groups", "Feature groups, e.g. base,coord,multiti");
        option(app, "--dim", "dim", "Latent dimension");
        option(app, "--n-neighbors", "n_neighbors", "UMAP neighbours (auto or a count)");
        option(app, "--epochs", "epochs", "Layout epochs");
        option(app, "--min-dist", "min_dist", "UMAP min_dist");
        option(app, "--spread", "spread", "UMAP spread");
        option(app, "--k", "k", "Voting neighbours (auto or a count)");
        option(app, "--seed", "seed", "Random seed");
        option(app, "--knn", "knn", "Neighbour graph: auto, exact or approximate");
        if (with_folds) {
            option(app, "--folds", "folds", "Cross-validation folds");
        }
    }

    void option(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values[key] = v; }, help);
    }

    RunConfig resolve() const {
        RunConfig c;
        if (!config_file.empty()) {
            c.apply(read_file(config_file));
        }
        for (const auto& [key, value] : values) {
            c.set(key, value);
        }
        if (deterministic) {
            c.deterministic = true;
        }
        return c;
    }

    std::string out_dir() const { return output_dir.empty() ? default_output_dir() : output_dir; }
};

// features ---------------------------------------------------------------

struct FeaturesArgs {
    std::string input;
    std::string output_dir;
    std::vector<double> spacing{1.0, 1.0, 1.0};
};

int cmd_features(const FeaturesArgs& args, std::ostream& out) {
    const Table t = read_table(args.input);
    const auto& src = args.input;
    const std::size_t c_subject = t.column("subject", src);
    const std::size_t c_i = t.column("i", src);
    const std::size_t c_j = t.column("j", src);
    const std::size_t c_k = t.column("k", src);
    const std::array<std::string_view, 6> comp{"dxx", "dyy", "dzz", "dxy", "dxz", "dyz"};
    std::array<std::size_t, 6> c_d{};
    for (std::size_t c = 0; c < 6; ++c) {
        c_d[c] = t.column(comp[c], src);
    }
    const auto labels_it = t.columns.find("labels");

    const std::size_t n = t.rows.size();
    std::vector<tensor::ScalarMaps> scalars(n);
    std::vector<tensor::WestinIndices> westin(n);
    std::vector<tensor::KnutssonVector> knut(n);
    std::vector<std::array<std::int32_t, 3>> ijk(n);
    for (std::size_t r = 0; r < n; ++r) {
        tensor::DiffusionTensor d{number_at(t, r, c_d[0], src), number_at(t, r, c_d[1], src),
                                  number_at(t, r, c_d[2], src), number_at(t, r, c_d[3], src),
                                  number_at(t, r, c_d[4], src), number_at(t, r, c_d[5], src)};
        ijk[r] = {int_at(t, r, c_i, src), int_at(t, r, c_j, src), int_at(t, r, c_k, src)};
        const auto eig = tensor::eigen_decompose(d);
        scalars[r] = tensor::scalar_maps(eig);
        try {
            westin[r] = tensor::westin_indices(eig);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::degenerate_tensor) {
                throw;
            }
            westin[r] = {};
        }
        knut[r] = tensor::knutsson_map(eig.vectors[0]);
    }

    // Edge strength is computed per subject on its bounding-box lattice;
    // lattice cells without a voxel hold a zero vector.
    std::vector<double> edge(n, 0.0);
    std::map<std::string, std::vector<std::size_t>> by_subject;
    for (std::size_t r = 0; r < n; ++r) {
        by_subject[t.rows[r][c_subject]].push_back(r);
    }
    const tensor::Vec3 spacing{args.spacing[0], args.spacing[1], args.spacing[2]};
    for (const auto& [subject, rows] : by_subject) {
        std::array<std::int32_t, 3> lo = ijk[rows[0]];
        std::array<std::int32_t, 3> hi = lo;
        for (std::size_t r : rows) {
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], ijk[r][a]);
                hi[a] = std::max(hi[a], ijk[r][a]);
            }
        }
        std::array<std::size_t, 3> dims{};
        for (int a = 0; a < 3; ++a) {
            dims[a] = std::max<std::size_t>(2, static_cast<std::size_t>(hi[a] - lo[a]) + 1);
        }
        tensor::KnutssonField field(dims[0], dims[1], dims[2]);
        for (std::size_t r : rows) {
            field.at(static_cast<std::size_t>(ijk[r][0] - lo[0]), static_cast<std::size_t>(ijk[r][1] - lo[1]),
                     static_cast<std::size_t>(ijk[r][2] - lo[2])) = knut[r];
        }
        const auto map = tensor::knutsson_edge_map(field, spacing);
        for (std::size_t r : rows) {
            edge[r] = map[field.index(static_cast<std::size_t>(ijk[r][0] - lo[0]),
                                      static_cast<std::size_t>(ijk[r][1] - lo[1]),
                                      static_cast<std::size_t>(ijk[r][2] - lo[2]))];
        }
    }

    std::ostringstream table;
    table << "subject\ti\tj\tk";
    if (labels_it != t.columns.end()) {
        table << "\tlabels";
    }
    table << "\tfa\tmd\trd\tad\ttr\tmode\twestin_cl\twestin_cp\twestin_cs"
             "\tknut1\tknut2\tknut3\tknut4\tknut5\tknut_edge\n";
    const auto f = [](double v) { return tsv::format_double(v); };
    for (std::size_t r = 0; r < n; ++r) {
        table << t.rows[r][c_subject] << '\t' << ijk[r][0] << '\t' << ijk[r][1] << '\t' << ijk[r][2];
        if (labels_it != t.columns.end()) {
            table << '\t' << t.rows[r][labels_it->second];
        }
        const auto& s = scalars[r];
        table << '\t' << f(s.fa) << '\t' << f(s.md) << '\t' << f(s.rd) << '\t' << f(s.ad) << '\t' << f(s.tr)
              << '\t' << f(s.mode) << '\t' << f(westin[r].cl) << '\t' << f(westin[r].cp) << '\t'
              << f(westin[r].cs);
        for (double v : knut[r]) {
            table << '\t' << f(v);
        }
        table << '\t' << f(edge[r]) << '\n';
    }

    OutputStage stage(args.output_dir.empty() ? default_output_dir() : args.output_dir);
    stage.write("features.tsv", table.str());
    stage.commit();
    out << "wrote features.tsv (" << n << " voxels)\n";
    return 0;
}

// synth ------------------------------------------------------------------

struct SynthArgs {
    std::string spec_file;
    std::vector<std::string> sets;
    std::string output_dir;
    std::string name = "synth.tsv";
};

int cmd_synth(const SynthArgs& args, std::ostream& out) {
    std::string text = args.spec_file.empty() ? std::string{} : read_file(args.spec_file);
    for (const auto& s : args.sets) {
        text += '\n' + s;
    }
    const auto spec = synth::SynthSpec::parse(text);
    const auto data = synth::generate(spec);
    std::ostringstream table;
    write_dataset(table, data.dataset);

    OutputStage stage(args.output_dir.empty() ? default_output_dir() : args.output_dir);
    stage.write(args.name, table.str());
    stage.write("synth.spec", spec.to_string());
    stage.commit();
    out << "wrote " << args.name << " (" << data.dataset.size() << " voxels)\n";
    return 0;
}

// fit --------------------------------------------------------------------

int cmd_fit(const ConfigFlags& flags, std::ostream& out) {
    const RunConfig config = flags.resolve();
    const Dataset dataset = load_for(config);
    const auto pipeline = config.pipeline();
    const auto rows = all_rows(dataset);
    const auto trained = fit_pipeline(dataset, rows, pipeline, config.seed);

    OutputStage stage(flags.out_dir());
    stage.write("model.bin", serialize_model(trained.model));
    stage.write("scaler.tsv", serialize_scaler(trained.scaler));
    stage.write("latent.tsv", latent_tsv(dataset, rows, trained.model.coords()));
    stage.write("config.resolved", config.to_string());
    stage.commit();
    out << "fitted " << trained.model.size() << " points into " << trained.model.dim()
        << " dimensions (n_neighbors=" << trained.model.n_neighbors() << ")\n";
    return 0;
}

// classify ---------------------------------------------------------------

struct ClassifyArgs {
    std::string model_dir;
    bool mask_mode = false;
};

int cmd_classify(const ConfigFlags& flags, const ClassifyArgs& args, std::ostream& out) {
    const fs::path dir(args.model_dir);
    RunConfig config;
    config.apply(read_file((dir / "config.resolved").string()));
    if (!flags.config_file.empty()) {
        config.apply(read_file(flags.config_file));
    }
    for (const auto& [key, value] : flags.values) {
        config.set(key, value);
    }
    if (flags.deterministic) {
        config.deterministic = true;
    }
    const std::size_t k = config.k != 0 ? config.k : default_k(config.dim);

    std::ifstream model_in(dir / "model.bin", std::ios::binary);
    if (!model_in) {
        throw Error(ErrorCode::io, "cannot open " + (dir / "model.bin").string());
    }
    const auto model = manifold::EmbeddingModel::read(model_in);
    std::ifstream scaler_in(dir / "scaler.tsv");
    if (!scaler_in) {
        throw Error(ErrorCode::io, "cannot open " + (dir / "scaler.tsv").string());
    }
    const auto scaler = RobustScaler::read_tsv(scaler_in);

    const std::string latent_path = (dir / "latent.tsv").string();
    const Table latent = read_table(latent_path);
    const std::size_t c_labels = latent.column("labels", latent_path);
    if (latent.rows.size() != model.size()) {
        throw Error(ErrorCode::schema, latent_path + ": row count does not match the model");
    }
    std::vector<LabelSet> train_labels;
    train_labels.reserve(latent.rows.size());
    for (const auto& row : latent.rows) {
        train_labels.push_back(parse_label_set(row[c_labels]));
    }
    const LabeledLatentSet labeled(model.coords(), train_labels, {}, config.keep_conflicted);

    const Dataset dataset = load_for(config);
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        if (args.mask_mode || !dataset.record(r).labels.scored().empty()) {
            rows.push_back(r);
        }
    }
    const Execution exec = config.deterministic ? Execution::sequential : Execution::parallel;
    const Matrix x = scaler.transform(select_features(dataset, config.groups, rows));
    const Matrix z = model.transform(x, exec);
    const auto votes = classify_points(z, labeled, k, exec);

    OutputStage stage(flags.out_dir());
    stage.write("predictions.tsv", predictions_tsv(dataset, rows, votes));
    if (!args.mask_mode) {
        std::vector<Nucleus> predicted;
        std::vector<LabelSet> truth;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            predicted.push_back(votes[r].winner);
            truth.push_back(dataset.record(rows[r]).labels);
        }
        EvaluationReport report;
        DiceRow row;
        row.fold = 1;
        row.scores = per_nucleus_dice(predicted, truth);
        row.overall = overall_dice(row.scores);
        report.folds.push_back(row);
        stage.write("scores.tsv", fold_table_tsv(report));
        out << "overall dice " << tsv::format_fixed(row.overall, 4) << '\n';
    }
    stage.commit();
    out << "classified " << rows.size() << " voxels (k=" << k << ")\n";
    return 0;
}

// crossval / ablate ------------------------------------------------------

int cmd_crossval(const ConfigFlags& flags, std::ostream& out) {
    const RunConfig config = flags.resolve();
    const Dataset dataset = load_for(config);
    const auto pipeline = config.pipeline();
    resolve_k(pipeline);

    OutputStage stage(flags.out_dir());
    const auto report = run_crossval(dataset, pipeline, [&](const FoldOutput& fold) {
        const std::string prefix = "fold_" + std::to_string(fold.fold) + "/";
        stage.write(prefix + "model.bin", serialize_model(fold.trained->model));
        stage.write(prefix + "scaler.tsv", serialize_scaler(fold.trained->scaler));
        stage.write(prefix + "predictions.tsv", predictions_tsv(dataset, fold.test_rows, fold.votes));
    });
    stage.write("crossval.tsv", fold_table_tsv(report));
    stage.write("summary.txt", summary_text(report));
    stage.write("config.resolved", config.to_string());
    stage.commit();
    for (const auto& row : report.folds) {
        out << "fold " << row.fold << " overall " << tsv::format_fixed(row.overall, 4) << '\n';
    }
    out << "mean " << tsv::format_fixed(report.overall.mean, 4) << " ± "
        << tsv::format_fixed(report.overall.std, 4) << '\n';
    return 0;
}

int cmd_ablate(const ConfigFlags& flags, std::ostream& out) {
    RunConfig config = flags.resolve();
    const auto subsets = config.ablation_subsets();
    FeatureGroupSpec needed;
    {
        std::vector<FeatureGroup> all;
        for (const auto& s : subsets) {
            all.insert(all.end(), s.groups().begin(), s.groups().end());
        }
        needed = FeatureGroupSpec(all);
    }
    RunConfig load_config = config;
    load_config.groups = needed;
    const Dataset dataset = load_for(load_config);

    std::vector<EvaluationReport> reports;
    const auto rows = run_ablation(dataset, config.pipeline(), subsets, &reports);

    std::ostringstream summary;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string key = "subset" + std::to_string(i + 1);
        summary << key << ".groups=" << rows[i].groups.to_string() << '\n'
                << key << ".dimension=" << rows[i].dimension << '\n'
                << key << ".mean=" << tsv::format_double(rows[i].overall.mean) << '\n'
                << key << ".std=" << tsv::format_double(rows[i].overall.std) << '\n';
    }
    OutputStage stage(flags.out_dir());
    stage.write("ablation.tsv", ablation_table_tsv(rows));
    stage.write("summary.txt", summary.str());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        stage.write("subset_" + std::to_string(i + 1) + "/crossval.tsv", fold_table_tsv(reports[i]));
    }
    stage.write("config.resolved", config.to_string());
    stage.commit();
    out << ablation_table_tsv(rows);
    return 0;
}

// plot -------------------------------------------------------------------

struct PlotArgs {
    std::string latent;
    std::string output_dir;
    std::string name = "embedding.svg";
};

int cmd_plot(const PlotArgs& args, std::ostream& out) {
    const Table t = read_table(args.latent);
    const std::size_t c1 = t.column("z1", args.latent);
    const std::size_t c2 = t.column("z2", args.latent);
    const std::size_t cl = t.column("labels", args.latent);
    Matrix z(t.rows.size(), 2);
    std::vector<LabelSet> labels;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        z(r, 0) = number_at(t, r, c1, args.latent);
        z(r, 1) = number_at(t, r, c2, args.latent);
        labels.push_back(parse_label_set(t.rows[r][cl]));
    }
    OutputStage stage(args.output_dir.empty() ? default_output_dir() : args.output_dir);
    stage.write(args.name, scatter_svg(z, labels));
    stage.commit();
    out << "wrote " << args.name << '\n';
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thalamic nucleus parcellation from voxel features"};
    app.require_subcommand(1);

    FeaturesArgs features;
    auto* features_cmd = app.add_subcommand("features", "Tensor-derived feature columns");
    features_cmd->add_option("--input", features.input, "TSV with subject, i, j, k, dxx, dyy, dzz, dxy, dxz, dyz")
        ->required();
    features_cmd->add_option("--spacing", features.spacing, "Voxel spacing x y z")->expected(3);
    features_cmd->add_option("--output-dir", features.output_dir, "Artifact directory");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic feature table");
    synth_cmd->add_option("--spec", synth_args.spec_file, "key=value spec file");
    synth_cmd->add_option("--set", synth_args.sets, "key=value override (repeatable)");
    synth_cmd->add_option("--output-dir", synth_args.output_dir, "Artifact directory");
    synth_cmd->add_option("--name", synth_args.name, "Table file name");

    ConfigFlags fit_flags;
    auto* fit_cmd = app.add_subcommand("fit", "Fit scaler and embedding on a dataset");
    fit_flags.add_to(fit_cmd, false);

    ConfigFlags classify_flags;
    ClassifyArgs classify_args;
    auto* classify_cmd = app.add_subcommand("classify", "Label voxels with a fitted model");
    classify_flags.add_to(classify_cmd, false);
    classify_cmd->add_option("--model-dir", classify_args.model_dir, "Output directory of fit")->required();
    classify_cmd->add_flag("--mask-mode", classify_args.mask_mode, "Label every voxel, not only labelled ones");

    ConfigFlags crossval_flags;
    auto* crossval_cmd = app.add_subcommand("crossval", "Subject-level k-fold cross-validation");
    crossval_flags.add_to(crossval_cmd, true);

    ConfigFlags ablate_flags;
    auto* ablate_cmd = app.add_subcommand("ablate", "Cross-validate feature-group subsets");
    ablate_flags.add_to(ablate_cmd, true);
    ablate_flags.option(ablate_cmd, "--subsets", "subsets", "Semicolon-separated group lists");

    PlotArgs plot_args;
    auto* plot_cmd = app.add_subcommand("plot", "SVG scatter of a 2-D embedding");
    plot_cmd->add_option("--latent", plot_args.latent, "latent.tsv from fit")->required();
    plot_cmd->add_option("--output-dir", plot_args.output_dir, "Artifact directory");
    plot_cmd->add_option("--name", plot_args.name, "SVG file name");

    std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: code=invalid-argument msg=" << one_line(e.what()) << '\n';
        return 2;
    }

    try {
        if (*features_cmd) return cmd_features(features, out);
        if (*synth_cmd) return cmd_synth(synth_args, out);
        if (*fit_cmd) return cmd_fit(fit_flags, out);
        if (*classify_cmd) return cmd_classify(classify_flags, classify_args, out);
        if (*crossval_cmd) return cmd_crossval(crossval_flags, out);
        if (*ablate_cmd) return cmd_ablate(ablate_flags, out);
        if (*plot_cmd) return cmd_plot(plot_args, out);
    } catch (const Error& e) {
        err << "error: code=" << to_string(e.code()) << " msg=" << one_line(e.what()) << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: code=io msg=" << one_line(e.what()) << '\n';
        return 1;
    }
    return 1;
}

} // namespace thalparc::cli
