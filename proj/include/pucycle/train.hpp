#pragma once

#include <cstdint>
#include <vector>

#include "pucycle/adam.hpp"
#include "pucycle/baselines.hpp"
#include "pucycle/config.hpp"
#include "pucycle/cycle.hpp"
#include "pucycle/trajgen.hpp"

namespace pucycle {

/// Mean per-sequence training loss, one entry per epoch. Any non-finite
/// entry aborts the run.
struct TrainLog {
    std::vector<double> epoch_loss;
};

struct TrainedModel {
    SequenceNet net;
    Adam opt;
    std::int64_t epoch = 0;
};

/// Copy of a sequence with the ground truth as its (fully observed)
/// observations — the noise-free pretraining view.
ObservedSequence to_noise_free(const ObservedSequence& seq);

/// Teacher-forced Prediction-RNN training: epochs_pre_clean on noise-free
/// views, then epochs_pre_noisy on the noisy sequences, one optimizer
/// throughout.
TrainedModel pretrain_prediction(const ExperimentConfig& cfg, const Dataset& ds, TrainLog* log);

struct JointModels {
    TrainedModel pred;
    TrainedModel up;
};

/// Joint cycle training for epochs_joint: per sequence one full unroll,
/// loss = joint_pred_weight * L_pred + joint_up_weight * L_up, one ADAM step
/// per network per sequence.
JointModels joint_train(const ExperimentConfig& cfg, const Dataset& ds, TrainedModel pretrained,
                        TrainLog* log);

/// Baseline training on imputed (fully-valued) sequences for
/// epochs_baseline. The imputer is the pretrained Prediction-RNN.
TrainedModel train_baseline(const ExperimentConfig& cfg, const Dataset& ds, BaselineKind kind,
                            const SequenceNet& imputer, TrainLog* log);

/// All models of one Table-1 condition. `imputer` is the pretrained
/// Prediction-RNN snapshot the baselines were trained against; evaluation
/// must impute with it, not with the jointly trained network.
struct ConditionModels {
    TrainedModel pred;
    TrainedModel up;
    TrainedModel one_to_one;
    TrainedModel encoder;
    TrainedModel imputer;
    TrainLog pretrain_log;
    TrainLog joint_log;
    TrainLog one_to_one_log;
    TrainLog encoder_log;
};

ConditionModels train_condition(const ExperimentConfig& cfg, const Dataset& ds);

}  // namespace pucycle
