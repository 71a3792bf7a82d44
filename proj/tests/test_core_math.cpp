#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pucycle/core_math.hpp"
#include "pucycle/rng.hpp"

using namespace pucycle;

namespace {

// Independent density oracle: explicit 2x2 inverse via the adjugate.
double nll_oracle(const Gaussian2D& g, const Vec2& z) {
    const double det = g.cov.det();
    const double dx = z.x - g.mean.x;
    const double dy = z.y - g.mean.y;
    const double quad =
        (dx * (g.cov.yy * dx - g.cov.xy * dy) + dy * (g.cov.xx * dy - g.cov.yx * dx)) / det;
    return std::log(2.0 * 3.14159265358979323846) + 0.5 * std::log(det) + 0.5 * quad;
}

Gaussian2D make_g(double mx, double my, double xx, double xy, double yy) {
    Gaussian2D g;
    g.mean = {mx, my};
    g.cov.xx = xx;
    g.cov.xy = xy;
    g.cov.yx = xy;
    g.cov.yy = yy;
    return g;
}

}  // namespace

TEST_SUITE("core_math") {

TEST_CASE("vec2 arithmetic and norm") {
    const Vec2 a{3.0, 4.0};
    const Vec2 b{1.0, -2.0};
    CHECK((a + b).x == 4.0);
    CHECK((a - b).y == 6.0);
    CHECK(a.norm() == 5.0);
    CHECK(a.dot(b) == doctest::Approx(3.0 - 8.0));
}

TEST_CASE("mat2 det, trace, spd") {
    Mat2 m = Mat2::diag(4.0, 1.0);
    CHECK(m.det() == 4.0);
    CHECK(m.trace() == 5.0);
    CHECK(m.spd());

    m.xy = m.yx = 3.0;  // det = 4 - 9 < 0
    CHECK_FALSE(m.spd());

    Mat2 asym = Mat2::identity();
    asym.xy = 0.1;
    CHECK_FALSE(asym.spd());
}

TEST_CASE("sigmoid values and symmetry") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(40.0) == 1.0);  // rounds to exactly 1 in double
    CHECK(sigmoid(-40.0) > 0.0);
    for (double x : {0.3, 1.7, 5.0, 20.0}) {
        CHECK(sigmoid(-x) == doctest::Approx(1.0 - sigmoid(x)).epsilon(1e-15));
    }
}

TEST_CASE("softplus values and asymptote") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(softplus(40.0) == 40.0);  // linear branch
    CHECK(softplus(-40.0) > 0.0);
    CHECK(softplus(-40.0) == doctest::Approx(std::exp(-40.0)).epsilon(1e-10));
}

TEST_CASE("nll of standard normal at the mean is log(2pi)") {
    const Gaussian2D g = make_g(0, 0, 1, 0, 1);
    CHECK(gaussian2d_nll(g, {0, 0}) == doctest::Approx(1.8378770664093453).epsilon(1e-15));
    CHECK(gaussian2d_nll(g, {1, 1}) == doctest::Approx(1.8378770664093453 + 1.0).epsilon(1e-15));
}

TEST_CASE("nll determinant term") {
    const Gaussian2D g = make_g(0, 0, 4, 0, 4);
    // log(2pi) + 0.5*log(16)
    CHECK(gaussian2d_nll(g, {0, 0}) ==
          doctest::Approx(1.8378770664093453 + 0.5 * std::log(16.0)).epsilon(1e-15));
}

TEST_CASE("nll matches adjugate-inverse oracle on correlated covariances") {
    Rng rng(11);
    for (int it = 0; it < 50; ++it) {
        const double l00 = 0.2 + rng.uniform();
        const double l10 = rng.uniform(-1.0, 1.0);
        const double l11 = 0.2 + rng.uniform();
        const Gaussian2D g = make_g(rng.normal(), rng.normal(), l00 * l00, l00 * l10,
                                    l10 * l10 + l11 * l11);
        const Vec2 z{rng.normal(), rng.normal()};
        CHECK(gaussian2d_nll(g, z) == doctest::Approx(nll_oracle(g, z)).epsilon(1e-12));
    }
}

TEST_CASE("nll rejects non-spd covariance") {
    CHECK_THROWS_AS(gaussian2d_nll(make_g(0, 0, 1, 2, 1), {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian2d_nll(make_g(0, 0, -1, 0, 1), {0, 0}), std::invalid_argument);
    Gaussian2D asym = make_g(0, 0, 1, 0, 1);
    asym.cov.xy = 0.2;  // yx stays 0
    CHECK_THROWS_AS(gaussian2d_nll(asym, {0, 0}), std::invalid_argument);
}

TEST_CASE("chol_params_to_cov at zero raw") {
    const Mat2 cov = chol_params_to_cov({0.0, 0.0, 0.0});
    const double ln2sq = std::log(2.0) * std::log(2.0);
    CHECK(cov.xx == doctest::Approx(ln2sq).epsilon(1e-15));
    CHECK(cov.yy == doctest::Approx(ln2sq).epsilon(1e-15));
    CHECK(cov.xy == 0.0);
    CHECK(cov.yx == 0.0);
    CHECK(cov.spd());
}

TEST_CASE("chol_params_to_cov matches hand-multiplied L*L^T") {
    const double l00 = std::log1p(std::exp(1.0));
    const double l11 = std::log1p(std::exp(-1.0));
    const double l10 = 0.5;
    const Mat2 cov = chol_params_to_cov({1.0, -1.0, 0.5});
    CHECK(cov.xx == doctest::Approx(l00 * l00).epsilon(1e-15));
    CHECK(cov.xy == doctest::Approx(l00 * l10).epsilon(1e-15));
    CHECK(cov.yx == cov.xy);
    CHECK(cov.yy == doctest::Approx(l10 * l10 + l11 * l11).epsilon(1e-15));
}

TEST_CASE("chol_params_to_cov large diagonal raw approaches raw^2") {
    const Mat2 cov = chol_params_to_cov({35.0, 33.0, 0.0});
    CHECK(cov.xx == doctest::Approx(35.0 * 35.0).epsilon(1e-12));
    CHECK(cov.yy == doctest::Approx(33.0 * 33.0).epsilon(1e-12));
}

TEST_CASE("chol_params_to_cov is spd for random raws") {
    Rng rng(3);
    for (int it = 0; it < 200; ++it) {
        const Mat2 cov = chol_params_to_cov(
            {rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0), rng.uniform(-10.0, 10.0)});
        CHECK(cov.spd());
    }
}

TEST_CASE("ade of exact estimates is zero") {
    const std::vector<Vec2> p{{0, 0}, {1, 2}, {-3, 4}};
    const auto [mean, sd] = ade(p, p);
    CHECK(mean == 0.0);
    CHECK(sd == 0.0);
}

TEST_CASE("ade pools euclidean errors") {
    const std::vector<Vec2> est{{0, 0}, {3, 4}};
    const std::vector<Vec2> gt{{0, 0}, {0, 0}};
    const auto [mean, sd] = ade(est, gt);
    CHECK(mean == doctest::Approx(2.5));   // (0 + 5) / 2
    CHECK(sd == doctest::Approx(2.5));     // population std of {0, 5}
}

TEST_CASE("ade rejects empty and mismatched inputs") {
    const std::vector<Vec2> none;
    const std::vector<Vec2> one{{0, 0}};
    const std::vector<Vec2> two{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(ade(none, none), std::invalid_argument);
    CHECK_THROWS_AS(ade(one, two), std::invalid_argument);
}

TEST_CASE("mean_and_population_std") {
    const std::vector<double> values{1.0, 2.0, 3.0, 4.0};
    const auto [mean, sd] = mean_and_population_std(values);
    CHECK(mean == doctest::Approx(2.5));
    CHECK(sd == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
}

TEST_CASE("principal axes of a diagonal covariance") {
    const PrincipalAxes ax = principal_axes(Mat2::diag(4.0, 1.0));
    CHECK(ax.major == doctest::Approx(4.0));
    CHECK(ax.minor == doctest::Approx(1.0));
    CHECK(ax.angle_rad == 0.0);
}

TEST_CASE("principal axes of a 45-degree covariance") {
    Mat2 cov;
    cov.xx = cov.yy = 2.5;
    cov.xy = cov.yx = 1.5;  // eigenvalues 4 and 1, axis at 45 degrees
    const PrincipalAxes ax = principal_axes(cov);
    CHECK(ax.major == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(ax.minor == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ax.angle_rad == doctest::Approx(0.25 * 3.14159265358979323846).epsilon(1e-12));
}

TEST_CASE("principal axes match characteristic-polynomial roots on random spd") {
    Rng rng(17);
    for (int it = 0; it < 100; ++it) {
        const Mat2 cov = chol_params_to_cov(
            {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-3.0, 3.0)});
        const PrincipalAxes ax = principal_axes(cov);
        const double half_tr = 0.5 * cov.trace();
        const double disc = std::sqrt(half_tr * half_tr - cov.det());
        CHECK(ax.major == doctest::Approx(half_tr + disc).epsilon(1e-12));
        CHECK(ax.minor == doctest::Approx(half_tr - disc).epsilon(1e-12));
        // The axis direction is an eigenvector: (cov - major*I) v = 0.
        const double vx = std::cos(ax.angle_rad);
        const double vy = std::sin(ax.angle_rad);
        CHECK((cov.xx - ax.major) * vx + cov.xy * vy == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(cov.yx * vx + (cov.yy - ax.major) * vy == doctest::Approx(0.0).epsilon(1e-9));
    }
}

}  // TEST_SUITE
