#include "pucycle/trajgen.hpp"

#include <cmath>
#include <stdexcept>

namespace pucycle {

namespace {
constexpr double kPi = 3.141592653589793;
// Substream tag for the dataset shuffle, out of reach of trajectory indices.
constexpr std::uint64_t kShuffleStream = 0x8000000000000000ULL;
}  // namespace

double Agent::turn_angle_rad() const { return turn_angle_deg * kPi / 180.0; }

void GeneratorConfig::validate() const {
    if (fps <= 0.0) throw std::invalid_argument("GeneratorConfig: fps must be positive");
    if (speed_std < 0.0 || turn_duration_std_s < 0.0) {
        throw std::invalid_argument("GeneratorConfig: negative std");
    }
    if (sigma_w < 0.0 || sigma_outl < 0.0) throw std::invalid_argument("GeneratorConfig: negative sigma");
    if (p_outl < 0.0 || p_outl > 1.0 || p_miss < 0.0 || p_miss > 1.0) {
        throw std::invalid_argument("GeneratorConfig: probability out of [0,1]");
    }
    if (len_min < 3 || len_min > len_max) {
        throw std::invalid_argument("GeneratorConfig: need 3 <= len_min <= len_max");
    }
    if (turn_angle_min_deg > turn_angle_max_deg) {
        throw std::invalid_argument("GeneratorConfig: turn angle range inverted");
    }
}

Agent sample_agent(const GeneratorConfig& cfg, int length, Rng& rng) {
    if (length < 3) throw std::invalid_argument("sample_agent: length must be at least 3");
    Agent a;
    a.speed = rng.normal(cfg.speed_mean, cfg.speed_std);
    while (a.speed < cfg.speed_min && cfg.speed_std > 0.0) {
        a.speed = rng.normal(cfg.speed_mean, cfg.speed_std);
    }
    if (a.speed < cfg.speed_min) a.speed = cfg.speed_min;

    a.heading0 = rng.uniform(0.0, 2.0 * kPi);

    const double mag_deg = rng.uniform(cfg.turn_angle_min_deg, cfg.turn_angle_max_deg);
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    a.turn_angle_deg = sign * mag_deg;

    // Duration in heading-change slots; a length-L rollout has L-2 of them.
    const int slots = length - 2;
    const double duration_s = rng.normal(cfg.turn_duration_mean_s, cfg.turn_duration_std_s);
    int turn_len = static_cast<int>(std::lround(duration_s * cfg.fps));
    if (turn_len < 1) turn_len = 1;
    if (turn_len > slots) turn_len = slots;
    a.turn_len = turn_len;
    a.turn_start = rng.uniform_int(0, slots - turn_len);
    return a;
}

GroundTruthTrajectory simulate(const Agent& agent, int length, const GeneratorConfig& cfg) {
    if (length < cfg.len_min || length > cfg.len_max) {
        throw std::invalid_argument("simulate: length outside configured range");
    }
    GroundTruthTrajectory gt;
    gt.dt = cfg.dt();
    gt.agent = agent;
    gt.positions.resize(static_cast<std::size_t>(length));
    gt.positions[0] = {0.0, 0.0};

    const double step = agent.speed * gt.dt;
    const double rate = agent.turn_angle_rad() / static_cast<double>(agent.turn_len);
    double heading = agent.heading0;
    for (int k = 0; k < length - 1; ++k) {
        if (k >= 1 && k > agent.turn_start && k <= agent.turn_start + agent.turn_len) {
            heading += rate;
        }
        const Vec2 d{step * std::cos(heading), step * std::sin(heading)};
        gt.positions[static_cast<std::size_t>(k + 1)] = gt.positions[static_cast<std::size_t>(k)] + d;
    }
    return gt;
}

ObservedSequence observe(const GroundTruthTrajectory& gt, const GeneratorConfig& cfg, Rng& rng) {
    ObservedSequence seq;
    seq.gt = gt;
    const std::size_t n = gt.positions.size();
    seq.obs.resize(n);
    seq.mask.assign(n, 1);
    seq.outlier.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const bool outl = rng.bernoulli(cfg.p_outl);
        const double sigma = outl ? cfg.sigma_outl : cfg.sigma_w;
        seq.outlier[k] = outl ? 1 : 0;
        seq.obs[k] = gt.positions[k] + Vec2{sigma * rng.normal(), sigma * rng.normal()};
    }
    return seq;
}

ObservedSequence mask_missing(ObservedSequence seq, const GeneratorConfig& cfg, Rng& rng) {
    for (std::size_t k = 1; k < seq.obs.size(); ++k) {
        if (rng.bernoulli(cfg.p_miss)) {
            seq.mask[k] = 0;
            seq.obs[k] = {0.0, 0.0};
            seq.outlier[k] = 0;
        }
    }
    return seq;
}

ObservedSequence make_sequence(const GeneratorConfig& cfg, std::uint64_t index) {
    Rng rng = Rng::substream(cfg.seed, index);
    const int length = rng.uniform_int(cfg.len_min, cfg.len_max);
    const Agent agent = sample_agent(cfg, length, rng);
    const GroundTruthTrajectory gt = simulate(agent, length, cfg);
    ObservedSequence seq = mask_missing(observe(gt, cfg, rng), cfg, rng);
    seq.id = index;
    return seq;
}

Dataset make_dataset(const GeneratorConfig& cfg, int n) {
    cfg.validate();
    if (n < 5) throw std::invalid_argument("make_dataset: need n >= 5 for a nonempty split");
    std::vector<ObservedSequence> all;
    all.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        all.push_back(make_sequence(cfg, static_cast<std::uint64_t>(i)));
    }
    Rng shuffle_rng = Rng::substream(cfg.seed, kShuffleStream);
    shuffle_rng.shuffle(all);

    const std::size_t n_train = static_cast<std::size_t>(n) * 4 / 5;  // floor(0.8 n)
    Dataset ds;
    ds.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
    ds.eval.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
    return ds;
}

}  // namespace pucycle
