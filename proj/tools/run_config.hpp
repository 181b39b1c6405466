#pragma once

#include "thalparc/pipeline.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace thalparc::cli {

/// Everything a command needs to reproduce a run. Serialises to the same
/// key=value form it is read from.
struct RunConfig {
    std::string data;
    FeatureGroupSpec groups{FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti};
    std::size_t dim = 2;
    /// 0 is "auto": min(2000, max(15, N / 15)) per training set.
    std::size_t n_neighbors = 0;
    std::size_t epochs = 1000;
    double min_dist = 0.1;
    double spread = 1.0;
    double learning_rate = 1.0;
    std::size_t negative_sample_rate = 5;
    /// 0 is "auto": the default for the latent dimension.
    std::size_t k = 0;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    bool deterministic = false;
    manifold::KnnMethod knn = manifold::KnnMethod::automatic;
    bool normalize_per_fold = true;
    bool keep_conflicted = false;
    /// Ablation subsets; empty means the standard seven.
    std::vector<FeatureGroupSpec> subsets;

    /// Throws ErrorCode::invalid_argument for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    void apply(std::string_view key_value_text);
    std::string to_string() const;

    PipelineConfig pipeline() const;
    std::vector<FeatureGroupSpec> ablation_subsets() const;
};

} // namespace thalparc::cli
