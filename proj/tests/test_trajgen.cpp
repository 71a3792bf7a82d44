#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pucycle/rng.hpp"
#include "pucycle/trajgen.hpp"

using namespace pucycle;

TEST_SUITE("trajgen") {

TEST_CASE("config validation") {
    GeneratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.fps = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GeneratorConfig{};
    cfg.len_min = 21;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GeneratorConfig{};
    cfg.p_miss = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(GeneratorConfig{}.dt() == 0.0625);
}

TEST_CASE("sampled agents respect all ranges") {
    GeneratorConfig cfg;
    Rng rng(21);
    bool saw_left = false, saw_right = false;
    for (int i = 0; i < 500; ++i) {
        const Agent a = sample_agent(cfg, 20, rng);
        CHECK(a.speed >= cfg.speed_min);
        CHECK(std::fabs(a.turn_angle_deg) >= 45.0);
        CHECK(std::fabs(a.turn_angle_deg) <= 100.0);
        CHECK(a.heading0 >= 0.0);
        CHECK(a.heading0 < 2.0 * 3.14159265358979323846);
        CHECK(a.turn_len >= 1);
        CHECK(a.turn_start >= 0);
        CHECK(a.turn_start + a.turn_len <= 18);  // length-20 rollout has 18 turn slots
        (a.turn_angle_deg < 0 ? saw_left : saw_right) = true;
    }
    CHECK(saw_left);
    CHECK(saw_right);
}

TEST_CASE("speed sampling matches the configured distribution") {
    GeneratorConfig cfg;
    Rng rng(22);
    std::vector<double> speeds(10000);
    for (double& s : speeds) s = sample_agent(cfg, 20, rng).speed;
    double mean = 0.0;
    for (double s : speeds) mean += s;
    mean /= static_cast<double>(speeds.size());
    double var = 0.0;
    for (double s : speeds) var += (s - mean) * (s - mean);
    var /= static_cast<double>(speeds.size());
    CHECK(std::fabs(mean - 1.38) < 0.02);
    CHECK(std::fabs(std::sqrt(var) - 0.37) < 0.02);
}

TEST_CASE("degenerate speed spread clamps to the floor") {
    GeneratorConfig cfg;
    cfg.speed_mean = 0.05;
    cfg.speed_std = 0.0;
    Rng rng(23);
    const Agent a = sample_agent(cfg, 12, rng);
    CHECK(a.speed == 0.1);
}

TEST_CASE("straight segments are collinear and the turn is perpendicular for 90 degrees") {
    GeneratorConfig cfg;
    Agent agent;
    agent.speed = 1.38;
    agent.heading0 = 0.0;
    agent.turn_angle_deg = 90.0;
    agent.turn_start = 5;
    agent.turn_len = 4;

    const GroundTruthTrajectory gt = simulate(agent, 20, cfg);
    REQUIRE(gt.length() == 20);
    CHECK(gt.positions[0].x == 0.0);
    CHECK(gt.positions[0].y == 0.0);

    const double step = 1.38 * 0.0625;  // 0.08625 m per frame
    for (int k = 0; k <= 6; ++k) {
        CHECK(gt.positions[static_cast<std::size_t>(k)].x ==
              doctest::Approx(k * step).epsilon(1e-12));
        CHECK(gt.positions[static_cast<std::size_t>(k)].y == 0.0);
    }

    // After the turn window every displacement points along +y.
    const Vec2 before = gt.positions[1] - gt.positions[0];
    const Vec2 after = gt.positions[15] - gt.positions[14];
    CHECK(before.dot(after) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(after.y == doctest::Approx(step).epsilon(1e-12));

    // Total heading change equals the sampled angle.
    const Vec2 last = gt.positions[19] - gt.positions[18];
    CHECK(std::atan2(last.y, last.x) ==
          doctest::Approx(agent.heading0 + agent.turn_angle_rad()).epsilon(1e-9));
}

TEST_CASE("turn rate is constant inside the window") {
    GeneratorConfig cfg;
    Agent agent;
    agent.speed = 1.0;
    agent.heading0 = 0.3;
    agent.turn_angle_deg = -72.0;
    agent.turn_start = 2;
    agent.turn_len = 6;

    const GroundTruthTrajectory gt = simulate(agent, 12, cfg);
    const double rate = agent.turn_angle_rad() / 6.0;
    for (int d = 0; d < 11; ++d) {
        const Vec2 v = gt.positions[static_cast<std::size_t>(d + 1)] -
                       gt.positions[static_cast<std::size_t>(d)];
        const int active = std::clamp(d - agent.turn_start, 0, agent.turn_len);
        const double heading = agent.heading0 + rate * active;
        CHECK(std::atan2(v.y, v.x) == doctest::Approx(heading).epsilon(1e-10));
    }
}

TEST_CASE("simulate rejects out-of-range lengths") {
    GeneratorConfig cfg;
    Agent agent;
    agent.speed = 1.0;
    CHECK_THROWS_AS(simulate(agent, 7, cfg), std::invalid_argument);
    CHECK_THROWS_AS(simulate(agent, 21, cfg), std::invalid_argument);
}

TEST_CASE("noise-free observation is the ground truth bit for bit") {
    GeneratorConfig cfg;
    cfg.sigma_w = 0.0;
    Rng rng(24);
    const Agent agent = sample_agent(cfg, 15, rng);
    const GroundTruthTrajectory gt = simulate(agent, 15, cfg);
    const ObservedSequence seq = observe(gt, cfg, rng);
    REQUIRE(seq.length() == 15);
    for (int k = 0; k < 15; ++k) {
        CHECK(seq.obs[static_cast<std::size_t>(k)].x == gt.positions[static_cast<std::size_t>(k)].x);
        CHECK(seq.obs[static_cast<std::size_t>(k)].y == gt.positions[static_cast<std::size_t>(k)].y);
        CHECK(seq.mask[static_cast<std::size_t>(k)] == 1);
        CHECK(seq.outlier[static_cast<std::size_t>(k)] == 0);
    }
}

TEST_CASE("outlier flags mark exactly the perturbed steps when sigma_w is zero") {
    GeneratorConfig cfg;
    cfg.sigma_w = 0.0;
    cfg.p_outl = 0.5;
    Rng rng(25);
    int flagged = 0, total = 0;
    for (int i = 0; i < 50; ++i) {
        const GroundTruthTrajectory gt = simulate(sample_agent(cfg, 16, rng), 16, cfg);
        const ObservedSequence seq = observe(gt, cfg, rng);
        for (int k = 0; k < seq.length(); ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const bool moved = seq.obs[ku].x != gt.positions[ku].x ||
                               seq.obs[ku].y != gt.positions[ku].y;
            if (seq.outlier[ku] == 1) {
                ++flagged;
                CHECK(moved);
            } else {
                CHECK_FALSE(moved);
            }
            ++total;
        }
    }
    CHECK(flagged > total / 4);
    CHECK(flagged < 3 * total / 4);
}

TEST_CASE("observation noise std lands in the configured band") {
    GeneratorConfig cfg;
    cfg.sigma_w = 0.05;
    Rng rng(26);
    std::vector<double> devs;
    for (int i = 0; i < 2000; ++i) {
        const GroundTruthTrajectory gt = simulate(sample_agent(cfg, 18, rng), 18, cfg);
        const ObservedSequence seq = observe(gt, cfg, rng);
        for (int k = 0; k < seq.length(); ++k) {
            const auto ku = static_cast<std::size_t>(k);
            devs.push_back(seq.obs[ku].x - gt.positions[ku].x);
            devs.push_back(seq.obs[ku].y - gt.positions[ku].y);
        }
    }
    const auto [mean, sd] = mean_and_population_std(devs);
    CHECK(mean == doctest::Approx(0.0).epsilon(0.001));
    CHECK(sd == doctest::Approx(0.05).epsilon(0.04));
}

TEST_CASE("masking keeps step zero and zeroes dropped entries") {
    GeneratorConfig cfg;
    cfg.p_miss = 0.4;
    cfg.p_outl = 0.3;
    Rng rng(27);
    int masked = 0;
    for (int i = 0; i < 200; ++i) {
        const GroundTruthTrajectory gt = simulate(sample_agent(cfg, 14, rng), 14, cfg);
        const ObservedSequence seq = mask_missing(observe(gt, cfg, rng), cfg, rng);
        CHECK(seq.mask[0] == 1);
        for (int k = 0; k < seq.length(); ++k) {
            const auto ku = static_cast<std::size_t>(k);
            if (seq.mask[ku] == 0) {
                ++masked;
                CHECK(seq.obs[ku].x == 0.0);
                CHECK(seq.obs[ku].y == 0.0);
                CHECK(seq.outlier[ku] == 0);
            }
        }
    }
    CHECK(masked > 0);
}

TEST_CASE("p_miss of one masks everything after step zero") {
    GeneratorConfig cfg;
    cfg.p_miss = 1.0;
    Rng rng(28);
    const GroundTruthTrajectory gt = simulate(sample_agent(cfg, 10, rng), 10, cfg);
    const ObservedSequence seq = mask_missing(observe(gt, cfg, rng), cfg, rng);
    CHECK(seq.mask[0] == 1);
    for (int k = 1; k < 10; ++k) CHECK(seq.mask[static_cast<std::size_t>(k)] == 0);
}

TEST_CASE("make_sequence is deterministic and order-free") {
    GeneratorConfig cfg;
    cfg.seed = 99;
    cfg.p_miss = 0.1;
    cfg.p_outl = 0.1;
    const ObservedSequence a = make_sequence(cfg, 5);
    const ObservedSequence b = make_sequence(cfg, 5);
    CHECK(a.id == 5);
    REQUIRE(a.length() == b.length());
    for (int k = 0; k < a.length(); ++k) {
        const auto ku = static_cast<std::size_t>(k);
        CHECK(a.obs[ku].x == b.obs[ku].x);
        CHECK(a.obs[ku].y == b.obs[ku].y);
        CHECK(a.gt.positions[ku].x == b.gt.positions[ku].x);
        CHECK(a.mask[ku] == b.mask[ku]);
    }
    // A different index gives a different trajectory.
    const ObservedSequence c = make_sequence(cfg, 6);
    const bool differs = c.length() != a.length() || c.gt.positions[1].x != a.gt.positions[1].x;
    CHECK(differs);
}

TEST_CASE("dataset split is 80/20 with shuffled, distinct ids") {
    GeneratorConfig cfg;
    cfg.seed = 7;
    const Dataset ds = make_dataset(cfg, 1000);
    CHECK(ds.train.size() == 800);
    CHECK(ds.eval.size() == 200);

    std::set<std::uint64_t> ids;
    std::vector<std::uint64_t> train_ids;
    for (const auto& s : ds.train) {
        ids.insert(s.id);
        train_ids.push_back(s.id);
    }
    for (const auto& s : ds.eval) ids.insert(s.id);
    CHECK(ids.size() == 1000);
    CHECK(*ids.begin() == 0);
    CHECK(*ids.rbegin() == 999);
    CHECK_FALSE(std::is_sorted(train_ids.begin(), train_ids.end()));

    // Lengths stay inside the configured range and reach both ends.
    int lmin = 100, lmax = 0;
    for (const auto& s : ds.train) {
        lmin = std::min(lmin, s.length());
        lmax = std::max(lmax, s.length());
    }
    CHECK(lmin == 8);
    CHECK(lmax == 20);
}

TEST_CASE("tiny dataset split uses the floor rule") {
    GeneratorConfig cfg;
    const Dataset ds = make_dataset(cfg, 5);
    CHECK(ds.train.size() == 4);
    CHECK(ds.eval.size() == 1);
    CHECK_THROWS_AS(make_dataset(cfg, 4), std::invalid_argument);
}

}  // TEST_SUITE
