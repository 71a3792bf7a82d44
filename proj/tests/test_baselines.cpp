#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pucycle/baselines.hpp"
#include "pucycle/rng.hpp"
#include "pucycle/trajgen.hpp"

using namespace pucycle;

namespace {

ObservedSequence hand_sequence(std::vector<Vec2> obs, std::vector<std::uint8_t> mask) {
    ObservedSequence seq;
    seq.gt.positions = obs;  // tests below never score against gt
    seq.obs = std::move(obs);
    seq.mask = std::move(mask);
    seq.outlier.assign(seq.mask.size(), 0);
    for (std::size_t k = 0; k < seq.mask.size(); ++k) {
        if (seq.mask[k] == 0) seq.obs[k] = {0.0, 0.0};
    }
    return seq;
}

ObservedSequence generated_sequence(std::uint64_t seed, double p_miss) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.p_miss = p_miss;
    cfg.sigma_w = 0.05;
    Rng rng = Rng::substream(cfg.seed, 9);
    const GroundTruthTrajectory gt = simulate(sample_agent(cfg, 15, rng), 15, cfg);
    return mask_missing(observe(gt, cfg, rng), cfg, rng);
}

double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-8});
}

// Central differences carry ~1e-9 absolute noise at h=1e-5 on an O(10) loss,
// so near-zero components need the absolute branch.
bool grad_close(double analytic, double fd) {
    return std::fabs(analytic - fd) < 1e-8 || rel_err(analytic, fd) < 1e-5;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("linear interpolation fills a single gap with the midpoint") {
    const ObservedSequence seq =
        hand_sequence({{0.0, 0.0}, {9.0, 9.0}, {2.0, 4.0}}, {1, 0, 1});
    const std::vector<Vec2> v = linear_interpolate(seq);
    REQUIRE(v.size() == 3);
    CHECK(v[0].x == 0.0);
    CHECK(v[1].x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(v[1].y == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v[2].x == 2.0);
    CHECK(v[2].y == 4.0);
}

TEST_CASE("linear interpolation splits a double gap into thirds") {
    const ObservedSequence seq =
        hand_sequence({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {3.0, -6.0}}, {1, 0, 0, 1});
    const std::vector<Vec2> v = linear_interpolate(seq);
    CHECK(v[1].x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(v[1].y == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(v[2].x == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v[2].y == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("a trailing gap holds the last observed value") {
    const ObservedSequence seq =
        hand_sequence({{0.0, 0.0}, {1.0, 2.0}, {0.0, 0.0}, {0.0, 0.0}}, {1, 1, 0, 0});
    const std::vector<Vec2> v = linear_interpolate(seq);
    CHECK(v[2].x == 1.0);
    CHECK(v[2].y == 2.0);
    CHECK(v[3].x == 1.0);
    CHECK(v[3].y == 2.0);
}

TEST_CASE("interpolation leaves observed entries untouched and validates the start") {
    const ObservedSequence seq = generated_sequence(11, 0.4);
    const std::vector<Vec2> v = linear_interpolate(seq);
    for (std::size_t k = 0; k < seq.mask.size(); ++k) {
        if (seq.mask[k] == 1) {
            CHECK(v[k].x == seq.obs[k].x);
            CHECK(v[k].y == seq.obs[k].y);
        }
    }

    ObservedSequence bad = seq;
    bad.mask[0] = 0;
    bad.obs[0] = {0.0, 0.0};
    CHECK_THROWS_AS(linear_interpolate(bad), std::invalid_argument);
    CHECK(linear_interpolate(ObservedSequence{}).empty());
}

TEST_CASE("imputation reproduces the masked-input prediction recursion") {
    SequenceNet pred = make_prediction_net({4, 6, 6});
    Rng rng(12);
    pred.init(rng);
    const ObservedSequence seq = generated_sequence(13, 0.35);

    const std::vector<Vec2> values = impute_with_prediction(seq, pred);
    REQUIRE(values.size() == static_cast<std::size_t>(seq.length()));

    LSTMState state = pred.initial_state();
    for (int k = 1; k < seq.length(); ++k) {
        const auto kp = static_cast<std::size_t>(k - 1);
        const double m_prev = seq.mask[kp];
        const std::array<double, 3> in{seq.obs[kp].x * m_prev, seq.obs[kp].y * m_prev, m_prev};
        const std::vector<double> o = pred.step(state, in);
        const auto ku = static_cast<std::size_t>(k);
        if (seq.mask[ku] == 0) {
            CHECK(values[ku].x == o[0]);
            CHECK(values[ku].y == o[1]);
        } else {
            CHECK(values[ku].x == seq.obs[ku].x);
            CHECK(values[ku].y == seq.obs[ku].y);
        }
    }
}

TEST_CASE("fully observed sequences impute to themselves") {
    SequenceNet pred = make_prediction_net({4, 6, 6});
    Rng rng(14);
    pred.init(rng);
    const ObservedSequence seq = generated_sequence(15, 0.0);
    const std::vector<Vec2> values = impute_with_prediction(seq, pred);
    for (std::size_t k = 0; k < values.size(); ++k) {
        CHECK(values[k].x == seq.obs[k].x);
        CHECK(values[k].y == seq.obs[k].y);
    }
}

TEST_CASE("one_to_one_forward matches direct stepping") {
    SequenceNet net = make_baseline_net({4, 6, 6});
    Rng rng(16);
    net.init(rng);
    const std::vector<Vec2> values{{0.1, -0.2}, {0.3, 0.4}, {-0.5, 0.6}, {0.7, 0.0}};

    const std::vector<Gaussian2D> out = one_to_one_forward(net, values);
    REQUIRE(out.size() == values.size());

    LSTMState state = net.initial_state();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::array<double, 2> in{values[k].x, values[k].y};
        const std::vector<double> o = net.step(state, in);
        CHECK(out[k].mean.x == o[0]);
        CHECK(out[k].mean.y == o[1]);
        const Mat2 cov = chol_params_to_cov({o[2], o[3], o[4]});
        CHECK(out[k].cov.xx == cov.xx);
        CHECK(out[k].cov.xy == cov.xy);
        CHECK(out[k].cov.yy == cov.yy);
        CHECK(out[k].cov.spd());
    }
}

TEST_CASE("encoder_forward is the final step of the stepwise pass") {
    SequenceNet net = make_baseline_net({4, 6, 6});
    Rng rng(17);
    net.init(rng);
    const std::vector<Vec2> values{{1.0, 0.5}, {0.9, 0.4}, {0.8, 0.3}, {0.7, 0.2}, {0.6, 0.1}};
    const Gaussian2D enc = encoder_forward(net, values);
    const Gaussian2D last = one_to_one_forward(net, values).back();
    CHECK(enc.mean.x == last.mean.x);
    CHECK(enc.mean.y == last.mean.y);
    CHECK(enc.cov.xx == last.cov.xx);
    CHECK(enc.cov.xy == last.cov.xy);
    CHECK(enc.cov.yy == last.cov.yy);

    CHECK_THROWS_AS(encoder_forward(net, {}), std::invalid_argument);
    CHECK(one_to_one_forward(net, {}).empty());
}

TEST_CASE("tape losses equal the forward-pass nll sums") {
    SequenceNet net = make_baseline_net({4, 6, 6});
    Rng rng(18);
    net.init(rng);
    const std::vector<Vec2> values{{0.2, 0.1}, {0.4, 0.2}, {0.6, 0.3}, {0.8, 0.4}};
    const std::vector<Vec2> gt{{0.25, 0.1}, {0.45, 0.2}, {0.65, 0.3}, {0.85, 0.4}};

    const std::vector<Gaussian2D> out = one_to_one_forward(net, values);
    double want_steps = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) want_steps += gaussian2d_nll(out[k], gt[k]);

    Tape t({&net.params()});
    CHECK(rel_err(t.value(tape_one_to_one(t, net, 0, values, gt))[0], want_steps) < 1e-12);

    const double want_final = gaussian2d_nll(encoder_forward(net, values), gt.back());
    Tape t2({&net.params()});
    CHECK(rel_err(t2.value(tape_encoder(t2, net, 0, values, gt.back()))[0], want_final) < 1e-12);
}

TEST_CASE("tape builders validate their inputs") {
    SequenceNet net = make_baseline_net({4, 6, 6});
    Tape t({&net.params()});
    const std::vector<Vec2> values{{0.0, 0.0}, {1.0, 1.0}};
    const std::vector<Vec2> short_gt{{0.0, 0.0}};
    CHECK_THROWS_AS(tape_one_to_one(t, net, 0, values, short_gt), std::invalid_argument);
    CHECK_THROWS_AS(tape_one_to_one(t, net, 0, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(tape_encoder(t, net, 0, {}, Vec2{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("finite differences confirm both baseline gradients") {
    SequenceNet net = make_baseline_net({4, 6, 6});
    Rng rng(19);
    net.init(rng);
    std::vector<Vec2> values, gt;
    for (int k = 0; k < 6; ++k) {
        values.push_back({rng.normal(0.0, 0.5), rng.normal(0.0, 0.5)});
        gt.push_back({values.back().x + rng.normal(0.0, 0.1), values.back().y});
    }

    auto check_grads = [&](auto&& build) {
        Tape t({&net.params()});
        const auto& grads = t.backward(build(t));
        const double h = 1e-5;
        ParamStore& ps = net.params();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const double orig = ps.flat()[i];
            ps.flat()[i] = orig + h;
            Tape tp({&ps});
            const double fp = tp.value(build(tp))[0];
            ps.flat()[i] = orig - h;
            Tape tm({&ps});
            const double fm = tm.value(build(tm))[0];
            ps.flat()[i] = orig;
            CHECK(grad_close(grads[0][i], (fp - fm) / (2.0 * h)));
        }
    };

    check_grads([&](Tape& t) { return tape_one_to_one(t, net, 0, values, gt); });
    check_grads([&](Tape& t) { return tape_encoder(t, net, 0, values, gt.back()); });
}

}  // TEST_SUITE
