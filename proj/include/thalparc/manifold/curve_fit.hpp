#pragma once

#include <cstddef>

namespace thalparc::manifold {

/// Parameters of the low-dimensional similarity 1 / (1 + a d^(2b)).
struct CurveParams {
    double a = 0.0;
    double b = 0.0;

    bool operator==(const CurveParams&) const = default;
};

inline constexpr std::size_t kCurveSamples = 300;
inline constexpr int kCurveMaxIterations = 500;
inline constexpr double kCurveGradientTolerance = 1e-8;

/// Levenberg-Marquardt least squares of 1 / (1 + a d^(2b)) against the
/// target (1 for d < min_dist, exp(-(d - min_dist) / spread) beyond) on 300
/// evenly spaced d in [0, 3 spread]. Throws ErrorCode::convergence when the
/// gradient norm stays above 1e-8 after 500 iterations.
CurveParams fit_curve(double min_dist, double spread);

/// Evaluates 1 / (1 + a d^(2b)).
double curve_value(const CurveParams& p, double d);

} // namespace thalparc::manifold
