#pragma once

#include "thalparc/labels.hpp"
#include "thalparc/matrix.hpp"

#include <span>
#include <string>

namespace thalparc::cli {

inline constexpr int kPlotSize = 1000;

/// 1000x1000 scatter of the first two latent axes. Points take the colour of
/// their first scored label; unlabelled points are grey. The legend lists
/// all thirteen nucleus codes.
std::string scatter_svg(const Matrix& latent, std::span<const LabelSet> labels);

} // namespace thalparc::cli
