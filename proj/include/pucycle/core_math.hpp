#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pucycle {

/// 2-D position or offset in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const;
};

/// 2x2 real matrix, row-major. When used as a covariance it must be
/// symmetric positive definite.
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yx = 0.0;
    double yy = 0.0;

    double det() const { return xx * yy - xy * yx; }
    double trace() const { return xx + yy; }
    bool symmetric() const { return xy == yx; }
    /// SPD test for a symmetric 2x2: leading minor and determinant positive.
    bool spd() const { return symmetric() && xx > 0.0 && det() > 0.0; }

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }
};

/// Bivariate Gaussian used for priors, posteriors and density-head outputs.
struct Gaussian2D {
    Vec2 mean;
    Mat2 cov;
};

double sigmoid(double x);
double softplus(double x);  // log(1+e^x), overflow-safe
// tanh comes from <cmath>

/// Negative log density -log N(z | g.mean, g.cov).
/// Throws std::invalid_argument if the covariance is not SPD.
double gaussian2d_nll(const Gaussian2D& g, const Vec2& z);

/// Maps three unconstrained reals to an SPD covariance through a Cholesky
/// factor L = [[softplus(r0), 0], [r2, softplus(r1)]], returning L*L^T.
Mat2 chol_params_to_cov(const std::array<double, 3>& raw);

/// Mean and population standard deviation of per-step Euclidean distances.
/// Throws std::invalid_argument on empty input or length mismatch.
std::pair<double, double> ade(std::span<const Vec2> est, std::span<const Vec2> gt);

/// Pooled mean/population-std over a flat list of per-step errors.
std::pair<double, double> mean_and_population_std(std::span<const double> values);

/// Principal axes of a symmetric 2x2 matrix: eigenvalues (major >= minor)
/// and the angle of the major-axis eigenvector.
struct PrincipalAxes {
    double major = 0.0;
    double minor = 0.0;
    double angle_rad = 0.0;
};
PrincipalAxes principal_axes(const Mat2& sym);

}  // namespace pucycle
