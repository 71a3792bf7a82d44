#pragma once

#include <cstdint>
#include <string>

#include "pucycle/adam.hpp"
#include "pucycle/cycle.hpp"
#include "pucycle/nets.hpp"
#include "pucycle/trajgen.hpp"

namespace pucycle {

struct ExperimentConfig {
    GeneratorConfig gen;
    LayerSizes sizes;
    double lr = 0.001;
    double grad_clip = 5.0;
    int epochs_pre_clean = 100;
    int epochs_pre_noisy = 100;
    int epochs_joint = 400;
    int epochs_baseline = 200;
    double joint_pred_weight = 1.0;
    double joint_up_weight = 1.0;
    GainSquash gain_squash = GainSquash::Sigmoid;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument

    AdamConfig adam() const {
        AdamConfig a;
        a.lr = lr;
        return a;
    }

    /// Step-0 posterior spread follows the generating noise level.
    CycleConfig cycle() const {
        CycleConfig c;
        c.gain_squash = gain_squash;
        c.init_sigma = gen.sigma_w;
        return c;
    }
};

std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);

void save_experiment_config(const ExperimentConfig& cfg, const std::string& path);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace pucycle
