#pragma once

#include "thalparc/matrix.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace thalparc {

inline constexpr double kLowerPercentile = 0.025;
inline constexpr double kUpperPercentile = 0.975;

/// Percentile of a sorted sample using linear interpolation between the
/// closest order statistics (position q * (n - 1)).
double percentile_sorted(std::span<const double> sorted, double q);

struct ColumnScale {
    std::string name;
    double min = 0.0;
    double p_lo = 0.0;
    double p_hi = 0.0;
    double max = 0.0;
    bool directional = false;

    bool degenerate() const noexcept { return !(p_lo < p_hi); }
    /// Maps one value: [min, p_lo) -> [0, 0.025), [p_lo, p_hi] -> [0.025, 0.975],
    /// (p_hi, max] -> (0.975, 1], clamped outside [min, max]. Directional
    /// columns are then mapped y -> 2y - 1.
    double apply(double x) const noexcept;

    bool operator==(const ColumnScale&) const = default;
};

/// Piecewise-linear robust scaler fit on training rows only.
class RobustScaler {
public:
    RobustScaler() = default;
    explicit RobustScaler(std::vector<ColumnScale> columns) : columns_(std::move(columns)) {}

    /// Needs at least two rows; rejects non-finite values. Column names are
    /// optional and only used in the sidecar file.
    static RobustScaler fit(const Matrix& train, const std::vector<bool>& directional,
                            const std::vector<std::string>& names = {});

    Matrix transform(const Matrix& x) const;

    std::size_t size() const noexcept { return columns_.size(); }
    const ColumnScale& column(std::size_t c) const { return columns_[c]; }
    const std::vector<ColumnScale>& columns() const noexcept { return columns_; }

    /// TSV sidecar: column, min, p_lo, p_hi, max, directional.
    void write_tsv(std::ostream& out) const;
    static RobustScaler read_tsv(std::istream& in);

    bool operator==(const RobustScaler&) const = default;

private:
    std::vector<ColumnScale> columns_;
};

} // namespace thalparc
