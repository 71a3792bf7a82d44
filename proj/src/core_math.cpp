#include "pucycle/core_math.hpp"

#include <cmath>
#include <stdexcept>

namespace pucycle {

double Vec2::norm() const { return std::hypot(x, y); }

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus(double x) {
    if (x > 30.0) return x;  // log(1+e^x) -> x, avoids overflow
    return std::log1p(std::exp(x));
}

double gaussian2d_nll(const Gaussian2D& g, const Vec2& z) {
    const Mat2& c = g.cov;
    if (!c.spd()) {
        throw std::invalid_argument("gaussian2d_nll: covariance is not SPD");
    }
    const double det = c.det();
    const double dx = z.x - g.mean.x;
    const double dy = z.y - g.mean.y;
    const double quad = (dx * dx * c.yy - 2.0 * dx * dy * c.xy + dy * dy * c.xx) / det;
    constexpr double log_two_pi = 1.8378770664093453;
    return log_two_pi + 0.5 * std::log(det) + 0.5 * quad;
}

Mat2 chol_params_to_cov(const std::array<double, 3>& raw) {
    const double l00 = softplus(raw[0]);
    const double l11 = softplus(raw[1]);
    const double l10 = raw[2];
    Mat2 cov;
    cov.xx = l00 * l00;
    cov.xy = l00 * l10;
    cov.yx = cov.xy;
    cov.yy = l10 * l10 + l11 * l11;
    return cov;
}

std::pair<double, double> ade(std::span<const Vec2> est, std::span<const Vec2> gt) {
    if (est.empty() || est.size() != gt.size()) {
        throw std::invalid_argument("ade: sequences must be nonempty and of equal length");
    }
    std::vector<double> dists(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) {
        dists[i] = (est[i] - gt[i]).norm();
    }
    return mean_and_population_std(dists);
}

std::pair<double, double> mean_and_population_std(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean_and_population_std: empty input");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

PrincipalAxes principal_axes(const Mat2& sym) {
    if (!sym.symmetric()) {
        throw std::invalid_argument("principal_axes: matrix must be symmetric");
    }
    const double a = sym.xx, b = sym.xy, c = sym.yy;
    const double half_tr = 0.5 * (a + c);
    const double d = 0.5 * (a - c);
    const double r = std::sqrt(d * d + b * b);
    PrincipalAxes axes;
    axes.major = half_tr + r;
    axes.minor = half_tr - r;
    axes.angle_rad = (b == 0.0 && d >= 0.0) ? 0.0 : 0.5 * std::atan2(2.0 * b, a - c);
    return axes;
}

}  // namespace pucycle
