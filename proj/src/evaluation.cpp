#include "thalparc/evaluation.hpp"

#include "thalparc/error.hpp"

#include <algorithm>
#include <cmath>

namespace thalparc {

double dice(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
    std::vector<std::size_t> a(predicted.begin(), predicted.end());
    std::vector<std::size_t> b(truth.begin(), truth.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (a.empty() && b.empty()) {
        return 1.0;
    }
    std::vector<std::size_t> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return 2.0 * static_cast<double>(both.size()) / static_cast<double>(a.size() + b.size());
}

NucleusDice per_nucleus_dice(std::span<const Nucleus> predicted, std::span<const LabelSet> truth) {
    if (predicted.size() != truth.size()) {
        throw Error(ErrorCode::invalid_argument, "prediction and truth lengths differ");
    }
    NucleusDice out;
    std::array<std::size_t, kNumNuclei> overlap{};
    for (std::size_t v = 0; v < truth.size(); ++v) {
        const LabelSet t = truth[v].scored();
        if (t.empty()) {
            continue;
        }
        ++out.evaluated;
        for (std::size_t c = 0; c < kNumNuclei; ++c) {
            out.truth_volume[c] += t.contains(static_cast<Nucleus>(c));
        }
        const auto p = index_of(predicted[v]);
        if (p < kNumNuclei) {
            ++out.predicted_volume[p];
            overlap[p] += t.contains(predicted[v]);
        }
    }
    for (std::size_t c = 0; c < kNumNuclei; ++c) {
        const std::size_t denom = out.truth_volume[c] + out.predicted_volume[c];
        out.dice[c] = denom == 0 ? 1.0 : 2.0 * static_cast<double>(overlap[c]) / static_cast<double>(denom);
    }
    return out;
}

double overall_dice(std::span<const double> dice, std::span<const double> volumes) {
    if (dice.size() != volumes.size()) {
        throw Error(ErrorCode::invalid_argument, "dice and volume lists differ in length");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < dice.size(); ++i) {
        if (volumes[i] < 0.0) {
            throw Error(ErrorCode::invalid_argument, "negative label volume");
        }
        num += volumes[i] * dice[i];
        den += volumes[i];
    }
    if (!(den > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "overall dice needs a non-zero total volume");
    }
    return num / den;
}

double overall_dice(const NucleusDice& scores) {
    std::array<double, kNumNuclei> vol{};
    for (std::size_t c = 0; c < kNumNuclei; ++c) {
        vol[c] = static_cast<double>(scores.truth_volume[c]);
    }
    return overall_dice(scores.dice, vol);
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd out;
    if (values.empty()) {
        return out;
    }
    for (double v : values) {
        out.mean += v;
    }
    out.mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - out.mean) * (v - out.mean);
    }
    out.std = std::sqrt(ss / static_cast<double>(values.size()));
    return out;
}

AblationRow aggregate_ablation(std::span<const DiceRow> folds, const FeatureGroupSpec& groups) {
    if (folds.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "ablation aggregation needs at least two folds");
    }
    std::vector<double> overall;
    for (const auto& f : folds) {
        overall.push_back(f.overall);
    }
    return {groups, groups.dimension(), mean_std(overall)};
}

} // namespace thalparc
