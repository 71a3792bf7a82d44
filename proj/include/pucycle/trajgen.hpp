#pragma once

#include <cstdint>
#include <vector>

#include "pucycle/core_math.hpp"
#include "pucycle/rng.hpp"

namespace pucycle {

struct GeneratorConfig {
    double fps = 16.0;
    double speed_mean = 1.38;   // m/s
    double speed_std = 0.37;    // m/s
    double speed_min = 0.1;     // truncation floor
    double turn_angle_min_deg = 45.0;
    double turn_angle_max_deg = 100.0;
    double turn_duration_mean_s = 1.83;
    double turn_duration_std_s = 0.29;
    double sigma_w = 0.01;   // nominal observation noise, m
    double sigma_outl = 0.5; // outlier noise, m
    double p_outl = 0.0;
    double p_miss = 0.0;
    int len_min = 8;
    int len_max = 20;
    std::uint64_t seed = 0;

    double dt() const { return 1.0 / fps; }
    void validate() const;  // throws std::invalid_argument on bad fields
};

/// Sampled motion plan: constant speed, one constant-rate turn window.
/// The turn occupies `turn_len` heading-change slots; slot s (1-based, before
/// displacement s) is active when turn_start < s <= turn_start + turn_len.
struct Agent {
    double speed = 0.0;           // m/s
    double heading0 = 0.0;        // rad
    double turn_angle_deg = 0.0;  // signed total change (degrees: the serialized unit)
    int turn_start = 0;
    int turn_len = 1;

    double turn_angle_rad() const;
};

struct GroundTruthTrajectory {
    double dt = 0.0625;
    std::vector<Vec2> positions;
    Agent agent;

    int length() const { return static_cast<int>(positions.size()); }
};

struct ObservedSequence {
    std::uint64_t id = 0;
    GroundTruthTrajectory gt;
    std::vector<Vec2> obs;               // placeholder (0,0) where masked
    std::vector<std::uint8_t> mask;      // 1 = observed
    std::vector<std::uint8_t> outlier;   // 1 = outlier noise; implies mask = 1

    int length() const { return static_cast<int>(obs.size()); }
};

/// Draws speed (truncated Gaussian), heading, signed turn angle and a turn
/// window that fits a trajectory of `length` points.
Agent sample_agent(const GeneratorConfig& cfg, int length, Rng& rng);

/// Constant-speed rollout from the origin; heading rotates at a constant
/// rate inside the turn window so the total change equals the sampled angle.
GroundTruthTrajectory simulate(const Agent& agent, int length, const GeneratorConfig& cfg);

/// Adds bimodal observation noise: per step an outlier flag ~ Ber(p_outl)
/// selects sigma_outl over sigma_w. Mask is all-observed at this stage.
ObservedSequence observe(const GroundTruthTrajectory& gt, const GeneratorConfig& cfg, Rng& rng);

/// Drops observations with probability p_miss per step (step 0 always kept),
/// writing the (0,0) placeholder and clearing outlier flags where masked.
ObservedSequence mask_missing(ObservedSequence seq, const GeneratorConfig& cfg, Rng& rng);

/// Full pipeline for trajectory `index` under `cfg.seed` via an independent
/// substream; serial and parallel generation agree bit-for-bit.
ObservedSequence make_sequence(const GeneratorConfig& cfg, std::uint64_t index);

struct Dataset {
    std::vector<ObservedSequence> train;
    std::vector<ObservedSequence> eval;
};

/// n sequences with lengths uniform in [len_min, len_max], shuffled by a
/// dedicated stream, then split train/eval = floor(0.8 n) / rest.
Dataset make_dataset(const GeneratorConfig& cfg, int n);

}  // namespace pucycle
