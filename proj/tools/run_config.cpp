#include "run_config.hpp"

#include "thalparc/config.hpp"
#include "thalparc/error.hpp"
#include "thalparc/tsv.hpp"

#include <sstream>

namespace thalparc::cli {

namespace {

std::size_t parse_auto(std::string_view key, std::string_view value) {
    return value == "auto" ? 0 : parse_size(key, value);
}

std::string format_auto(std::size_t v) { return v == 0 ? "auto" : std::to_string(v); }

std::string_view knn_name(manifold::KnnMethod m) {
    switch (m) {
    case manifold::KnnMethod::exact: return "exact";
    case manifold::KnnMethod::approximate: return "approximate";
    case manifold::KnnMethod::automatic: break;
    }
    return "auto";
}

} // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
    if (key == "data") data = std::string(value);
    else if (key == "groups") groups = FeatureGroupSpec::parse(value);
    else if (key == "dim") dim = parse_size(key, value);
    else if (key == "n_neighbors") n_neighbors = parse_auto(key, value);
    else if (key == "epochs") epochs = parse_size(key, value);
    else if (key == "min_dist") min_dist = parse_real(key, value);
    else if (key == "spread") spread = parse_real(key, value);
    else if (key == "learning_rate") learning_rate = parse_real(key, value);
    else if (key == "negative_sample_rate") negative_sample_rate = parse_size(key, value);
    else if (key == "k") k = parse_auto(key, value);
    else if (key == "folds") folds = parse_size(key, value);
    else if (key == "seed") seed = parse_size(key, value);
    else if (key == "deterministic") deterministic = parse_bool(key, value);
    else if (key == "normalize_per_fold") normalize_per_fold = parse_bool(key, value);
    else if (key == "keep_conflicted") keep_conflicted = parse_bool(key, value);
    else if (key == "knn") {
        if (value == "auto") knn = manifold::KnnMethod::automatic;
        else if (value == "exact") knn = manifold::KnnMethod::exact;
        else if (value == "approximate") knn = manifold::KnnMethod::approximate;
        else throw Error(ErrorCode::invalid_argument, "knn: expected auto, exact or approximate");
    } else if (key == "subsets") {
        subsets.clear();
        for (auto part : tsv::split(value, ';')) {
            if (!part.empty()) {
                subsets.push_back(FeatureGroupSpec::parse(part));
            }
        }
    } else {
        throw Error(ErrorCode::invalid_argument, "unknown config key '" + std::string(key) + "'");
    }
    if (dim == 0) {
        throw Error(ErrorCode::invalid_argument, "dim must be positive");
    }
}

void RunConfig::apply(std::string_view key_value_text) {
    for (const auto& [key, value] : parse_key_values(key_value_text)) {
        set(key, value);
    }
}

std::string RunConfig::to_string() const {
    std::ostringstream out;
    out << "data=" << data << '\n'
        << "groups=" << groups.to_string() << '\n'
        << "dim=" << dim << '\n'
        << "n_neighbors=" << format_auto(n_neighbors) << '\n'
        << "epochs=" << epochs << '\n'
        << "min_dist=" << format_real(min_dist) << '\n'
        << "spread=" << format_real(spread) << '\n'
        << "learning_rate=" << format_real(learning_rate) << '\n'
        << "negative_sample_rate=" << negative_sample_rate << '\n'
        << "k=" << format_auto(k) << '\n'
        << "folds=" << folds << '\n'
        << "seed=" << seed << '\n'
        << "deterministic=" << (deterministic ? "true" : "false") << '\n'
        << "knn=" << knn_name(knn) << '\n'
        << "normalize_per_fold=" << (normalize_per_fold ? "true" : "false") << '\n'
        << "keep_conflicted=" << (keep_conflicted ? "true" : "false") << '\n';
    if (!subsets.empty()) {
        out << "subsets=";
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            out << (i ? ";" : "") << subsets[i].to_string();
        }
        out << '\n';
    }
    return out.str();
}

PipelineConfig RunConfig::pipeline() const {
    PipelineConfig c;
    c.groups = groups;
    c.umap.dim = dim;
    c.umap.n_neighbors = n_neighbors;
    c.umap.epochs = epochs;
    c.umap.min_dist = min_dist;
    c.umap.spread = spread;
    c.umap.learning_rate = learning_rate;
    c.umap.negative_sample_rate = negative_sample_rate;
    c.umap.seed = seed;
    c.umap.knn = knn;
    c.k = k;
    c.folds = folds;
    c.seed = seed;
    c.normalize_per_fold = normalize_per_fold;
    c.keep_conflicted = keep_conflicted;
    c.exec = deterministic ? Execution::sequential : Execution::parallel;
    c.umap.exec = c.exec;
    return c;
}

std::vector<FeatureGroupSpec> RunConfig::ablation_subsets() const {
    return subsets.empty() ? thalparc::ablation_subsets() : subsets;
}

} // namespace thalparc::cli
