#include "svg_plot.hpp"

#include "thalparc/error.hpp"
#include "thalparc/tsv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace thalparc::cli {

namespace {

constexpr std::array<std::string_view, kNumNuclei> kPalette{
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a", "#637939"};
constexpr std::string_view kUnlabelled = "#c8c8c8";

constexpr double kLeft = 40.0;
constexpr double kTop = 40.0;
constexpr double kPlotWidth = 780.0;

std::string_view colour_of(const LabelSet& labels) {
    for (Nucleus n : kScoredNuclei) {
        if (labels.contains(n)) {
            return kPalette[index_of(n)];
        }
    }
    return kUnlabelled;
}

} // namespace

std::string scatter_svg(const Matrix& latent, std::span<const LabelSet> labels) {
    if (latent.cols() < 2) {
        throw Error(ErrorCode::invalid_argument, "plot needs at least two latent columns");
    }
    if (labels.size() != latent.rows()) {
        throw Error(ErrorCode::invalid_argument, "plot labels and coordinates differ in length");
    }
    double lo[2] = {0.0, 0.0};
    double hi[2] = {1.0, 1.0};
    for (int a = 0; a < 2; ++a) {
        if (latent.rows() == 0) {
            break;
        }
        lo[a] = hi[a] = latent(0, a);
        for (std::size_t r = 0; r < latent.rows(); ++r) {
            lo[a] = std::min(lo[a], latent(r, a));
            hi[a] = std::max(hi[a], latent(r, a));
        }
        if (!(hi[a] > lo[a])) {
            lo[a] -= 0.5;
            hi[a] += 0.5;
        }
    }
    const double scale = kPlotWidth / std::max(hi[0] - lo[0], hi[1] - lo[1]);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotSize << "\" height=\"" << kPlotSize
        << "\" viewBox=\"0 0 " << kPlotSize << ' ' << kPlotSize << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g id=\"points\">\n";
    for (std::size_t r = 0; r < latent.rows(); ++r) {
        const double x = kLeft + (latent(r, 0) - lo[0]) * scale;
        const double y = kTop + kPlotWidth - (latent(r, 1) - lo[1]) * scale;
        out << "<circle cx=\"" << tsv::format_fixed(x, 2) << "\" cy=\"" << tsv::format_fixed(y, 2)
            << "\" r=\"2\" fill=\"" << colour_of(labels[r]) << "\"/>\n";
    }
    out << "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"16\">\n";
    for (std::size_t i = 0; i < kNumNuclei; ++i) {
        const Nucleus n = kScoredNuclei[i];
        const int y = 60 + static_cast<int>(i) * 28;
        out << "<rect x=\"860\" y=\"" << y - 12 << "\" width=\"14\" height=\"14\" fill=\"" << kPalette[i]
            << "\"/>\n";
        out << "<text x=\"882\" y=\"" << y << "\">" << nucleus_code(n) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

} // namespace thalparc::cli
