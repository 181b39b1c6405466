#include "thalparc/normalizer.hpp"

#include "thalparc/error.hpp"
#include "thalparc/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace thalparc {

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw Error(ErrorCode::invalid_argument, "percentile of an empty sample");
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double ColumnScale::apply(double x) const noexcept {
    double y = 0.5;
    if (!degenerate()) {
        if (x < min) {
            y = 0.0;
        } else if (x < p_lo) {
            y = std::lerp(0.0, kLowerPercentile, (x - min) / (p_lo - min));
        } else if (x <= p_hi) {
            y = std::lerp(kLowerPercentile, kUpperPercentile, (x - p_lo) / (p_hi - p_lo));
        } else if (x <= max) {
            y = std::lerp(kUpperPercentile, 1.0, (x - p_hi) / (max - p_hi));
        } else {
            y = 1.0;
        }
        y = std::clamp(y, 0.0, 1.0);
    }
    return directional ? 2.0 * y - 1.0 : y;
}

RobustScaler RobustScaler::fit(const Matrix& train, const std::vector<bool>& directional,
                               const std::vector<std::string>& names) {
    if (train.rows() < 2) {
        throw Error(ErrorCode::invalid_argument, "scaler needs at least two training rows");
    }
    if (directional.size() != train.cols()) {
        throw Error(ErrorCode::invalid_argument, "directional flags do not match column count");
    }
    if (!names.empty() && names.size() != train.cols()) {
        throw Error(ErrorCode::invalid_argument, "column names do not match column count");
    }

    std::vector<ColumnScale> cols(train.cols());
    std::vector<double> buf(train.rows());
    for (std::size_t c = 0; c < train.cols(); ++c) {
        for (std::size_t r = 0; r < train.rows(); ++r) {
            buf[r] = train(r, c);
            if (!std::isfinite(buf[r])) {
                throw Error(ErrorCode::non_finite, "non-finite training value in column " +
                                                       std::to_string(c) + ", row " + std::to_string(r));
            }
        }
        std::sort(buf.begin(), buf.end());
        auto& s = cols[c];
        s.name = names.empty() ? "col" + std::to_string(c) : names[c];
        s.min = buf.front();
        s.max = buf.back();
        s.p_lo = percentile_sorted(buf, kLowerPercentile);
        s.p_hi = percentile_sorted(buf, kUpperPercentile);
        s.directional = directional[c];
    }
    return RobustScaler(std::move(cols));
}

Matrix RobustScaler::transform(const Matrix& x) const {
    if (x.cols() != columns_.size()) {
        throw Error(ErrorCode::invalid_argument, "scaler has " + std::to_string(columns_.size()) +
                                                     " columns, matrix has " + std::to_string(x.cols()));
    }
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            out(r, c) = columns_[c].apply(x(r, c));
        }
    }
    return out;
}

void RobustScaler::write_tsv(std::ostream& out) const {
    out << "column\tmin\tp_lo\tp_hi\tmax\tdirectional\n";
    for (const auto& c : columns_) {
        out << c.name << '\t' << tsv::format_double(c.min) << '\t' << tsv::format_double(c.p_lo) << '\t'
            << tsv::format_double(c.p_hi) << '\t' << tsv::format_double(c.max) << '\t'
            << (c.directional ? 1 : 0) << '\n';
    }
}

RobustScaler RobustScaler::read_tsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || tsv::chomp(line) != "column\tmin\tp_lo\tp_hi\tmax\tdirectional") {
        throw Error(ErrorCode::schema, "scaler sidecar has an unexpected header");
    }
    std::vector<ColumnScale> cols;
    while (std::getline(in, line)) {
        const auto view = tsv::chomp(line);
        if (view.empty()) {
            continue;
        }
        const auto cells = tsv::split(view);
        ColumnScale c;
        if (cells.size() != 6 || !tsv::parse_double(cells[1], c.min) ||
            !tsv::parse_double(cells[2], c.p_lo) || !tsv::parse_double(cells[3], c.p_hi) ||
            !tsv::parse_double(cells[4], c.max) || (cells[5] != "0" && cells[5] != "1")) {
            throw Error(ErrorCode::data, "malformed scaler row '" + std::string(view) + "'");
        }
        c.name = std::string(cells[0]);
        c.directional = cells[5] == "1";
        cols.push_back(std::move(c));
    }
    return RobustScaler(std::move(cols));
}

} // namespace thalparc
