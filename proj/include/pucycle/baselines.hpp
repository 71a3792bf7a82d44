#pragma once

#include <vector>

#include "pucycle/cycle.hpp"
#include "pucycle/nets.hpp"
#include "pucycle/trajgen.hpp"

namespace pucycle {

inline constexpr int kBaselineInDim = 2;  // position only

enum class BaselineKind { OneToOne, Encoder };

SequenceNet make_baseline_net(LayerSizes sizes = {});

/// Stepwise filtering baseline: one Gaussian estimate of the true current
/// position per input step. Expects a fully-valued sequence.
std::vector<Gaussian2D> one_to_one_forward(const SequenceNet& net, const std::vector<Vec2>& values);

/// Encoder baseline: consumes the whole sequence, estimates the final
/// position from the last hidden state.
Gaussian2D encoder_forward(const SequenceNet& net, const std::vector<Vec2>& values);

/// Per-step NLL sum against ground truth (training graph for OneToOne).
int tape_one_to_one(Tape& t, const SequenceNet& net, int store,
                    const std::vector<Vec2>& values, const std::vector<Vec2>& gt);

/// Final-position NLL (training graph for Encoder).
int tape_encoder(Tape& t, const SequenceNet& net, int store,
                 const std::vector<Vec2>& values, const Vec2& gt_final);

/// Fills masked entries with the prior means of the prediction recursion run
/// over the masked inputs; observed entries are returned unchanged.
std::vector<Vec2> impute_with_prediction(const ObservedSequence& seq, const SequenceNet& pred);

/// Interior gaps interpolate linearly between flanking observations;
/// trailing gaps hold the last observed value. Step 0 must be observed.
std::vector<Vec2> linear_interpolate(const ObservedSequence& seq);

}  // namespace pucycle
