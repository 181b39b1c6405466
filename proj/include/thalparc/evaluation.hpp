#pragma once

#include "thalparc/feature_store.hpp"
#include "thalparc/labels.hpp"

#include <array>
#include <span>
#include <vector>

namespace thalparc {

/// 2|A n B| / (|A| + |B|) over voxel ids; 1 when both are empty.
double dice(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

/// Per-nucleus scores, indexed in schema order (kScoredNuclei).
struct NucleusDice {
    std::array<double, kNumNuclei> dice{};
    std::array<std::size_t, kNumNuclei> truth_volume{};
    std::array<std::size_t, kNumNuclei> predicted_volume{};
    std::size_t evaluated = 0;
};

/// Only voxels with at least one scored truth label are evaluated. A voxel
/// belongs to nucleus L's truth set if its label set contains L; its single
/// prediction lands in at most one intersection.
NucleusDice per_nucleus_dice(std::span<const Nucleus> predicted, std::span<const LabelSet> truth);

/// sum(v_i d_i) / sum(v_i). Throws if every volume is zero.
double overall_dice(std::span<const double> dice, std::span<const double> volumes);
double overall_dice(const NucleusDice& scores);

struct DiceRow {
    std::size_t fold = 0;  // 1-based
    NucleusDice scores;
    double overall = 0.0;
};

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population
};

MeanStd mean_std(std::span<const double> values);

struct AblationRow {
    FeatureGroupSpec groups;
    std::size_t dimension = 0;
    MeanStd overall;
};

/// Mean and population standard deviation of the per-fold overall Dice.
/// Needs at least two folds.
AblationRow aggregate_ablation(std::span<const DiceRow> folds, const FeatureGroupSpec& groups);

} // namespace thalparc
