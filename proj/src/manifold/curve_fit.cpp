#include "thalparc/manifold/curve_fit.hpp"

#include "thalparc/error.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace thalparc::manifold {

namespace {

struct Normal {
    double cost = 0.0;
    std::array<double, 2> grad{};
    std::array<double, 3> jtj{};  // [aa, ab, bb]
};

Normal evaluate(const std::vector<double>& xs, const std::vector<double>& ys, double a, double b) {
    Normal n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        double u = 0.0;
        double log_x = 0.0;
        if (x > 0.0) {
            u = std::pow(x, 2.0 * b);
            log_x = std::log(x);
        }
        const double denom = 1.0 + a * u;
        const double r = 1.0 / denom - ys[i];
        const double ja = -u / (denom * denom);
        const double jb = -a * u * 2.0 * log_x / (denom * denom);
        n.cost += 0.5 * r * r;
        n.grad[0] += ja * r;
        n.grad[1] += jb * r;
        n.jtj[0] += ja * ja;
        n.jtj[1] += ja * jb;
        n.jtj[2] += jb * jb;
    }
    return n;
}

} // namespace

double curve_value(const CurveParams& p, double d) {
    if (d <= 0.0) {
        return 1.0;
    }
    return 1.0 / (1.0 + p.a * std::pow(d, 2.0 * p.b));
}

CurveParams fit_curve(double min_dist, double spread) {
    if (!(min_dist >= 0.0) || !(spread > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "curve fit needs min_dist >= 0 and spread > 0");
    }

    std::vector<double> xs(kCurveSamples);
    std::vector<double> ys(kCurveSamples);
    for (std::size_t i = 0; i < kCurveSamples; ++i) {
        xs[i] = 3.0 * spread * static_cast<double>(i) / static_cast<double>(kCurveSamples - 1);
        ys[i] = xs[i] < min_dist ? 1.0 : std::exp(-(xs[i] - min_dist) / spread);
    }

    double a = 1.0;
    double b = 1.0;
    double lambda = 1e-3;
    Normal cur = evaluate(xs, ys, a, b);
    for (int it = 0; it < kCurveMaxIterations; ++it) {
        if (std::hypot(cur.grad[0], cur.grad[1]) <= kCurveGradientTolerance) {
            return {a, b};
        }
        // Solve (JtJ + lambda diag(JtJ)) step = -grad.
        const double m00 = cur.jtj[0] * (1.0 + lambda);
        const double m11 = cur.jtj[2] * (1.0 + lambda);
        const double m01 = cur.jtj[1];
        const double det = m00 * m11 - m01 * m01;
        if (det == 0.0 || !std::isfinite(det)) {
            lambda *= 10.0;
            continue;
        }
        const double da = (-cur.grad[0] * m11 + cur.grad[1] * m01) / det;
        const double db = (-cur.grad[1] * m00 + cur.grad[0] * m01) / det;
        const double na = a + da;
        const double nb = b + db;
        if (na > 0.0 && nb > 0.0) {
            const Normal next = evaluate(xs, ys, na, nb);
            if (next.cost <= cur.cost) {
                a = na;
                b = nb;
                cur = next;
                lambda = std::max(lambda / 10.0, 1e-12);
                continue;
            }
        }
        lambda *= 10.0;
    }
    if (std::hypot(cur.grad[0], cur.grad[1]) <= kCurveGradientTolerance) {
        return {a, b};
    }
    throw Error(ErrorCode::convergence, "curve fit did not converge within 500 iterations");
}

} // namespace thalparc::manifold
