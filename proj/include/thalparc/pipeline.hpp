#pragma once

#include "thalparc/evaluation.hpp"
#include "thalparc/execution.hpp"
#include "thalparc/feature_store.hpp"
#include "thalparc/latent_classifier.hpp"
#include "thalparc/manifold/embedding.hpp"
#include "thalparc/normalizer.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace thalparc {

struct PipelineConfig {
    FeatureGroupSpec groups{FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti};
    manifold::UmapOptions umap;
    /// 0 means default_k(umap.dim).
    std::size_t k = 0;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    /// false fits the scaler once on every subject instead of per training fold.
    bool normalize_per_fold = true;
    bool keep_conflicted = false;
    Execution exec = Execution::sequential;
};

std::size_t resolve_k(const PipelineConfig& config);

/// Scaler and embedding fit on a set of training rows.
struct TrainedPipeline {
    RobustScaler scaler;
    manifold::EmbeddingModel model;
    std::vector<std::size_t> rows;  // dataset rows of the training points
};

TrainedPipeline fit_pipeline(const Dataset& dataset, std::span<const std::size_t> train_rows,
                             const PipelineConfig& config, std::uint64_t seed,
                             const RobustScaler* scaler_override = nullptr);

/// Everything a fold produces, handed to an optional observer (the CLI
/// persists the models from here).
struct FoldOutput {
    std::size_t fold = 0;  // 1-based
    const TrainedPipeline* trained = nullptr;
    std::vector<std::size_t> test_rows;
    Matrix test_latent;
    std::vector<VoteResult> votes;
};

struct EvaluationReport {
    FeatureGroupSpec groups;
    std::size_t dim = 0;
    std::size_t k = 0;
    FoldPlan plan;
    std::vector<DiceRow> folds;
    MeanStd overall;
    std::array<MeanStd, kNumNuclei> per_nucleus{};
};

using FoldObserver = std::function<void(const FoldOutput&)>;

/// Subject-level k-fold cross-validation: per fold, scale -> embed train ->
/// place test -> vote -> score. Deterministic for a fixed seed in sequential
/// mode. Stage errors are rethrown with the fold number attached.
EvaluationReport run_crossval(const Dataset& dataset, const PipelineConfig& config,
                              const FoldObserver& observer = {});

/// The seven standard ablation subsets, in report row order.
std::vector<FeatureGroupSpec> ablation_subsets();

std::vector<AblationRow> run_ablation(const Dataset& dataset, const PipelineConfig& config,
                                      std::span<const FeatureGroupSpec> subsets,
                                      std::vector<EvaluationReport>* reports = nullptr);

/// Per-fold Dice table: Label, Overall, AN ... VPM (VLP before VLa), two decimals.
std::string fold_table_tsv(const EvaluationReport& report);
/// key=value lines at full precision.
std::string summary_text(const EvaluationReport& report);
/// Dim., one check column per group, "mean ± std" with three decimals.
std::string ablation_table_tsv(std::span<const AblationRow> rows);

} // namespace thalparc
