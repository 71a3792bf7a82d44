#pragma once

#include <string>
#include <vector>

#include "pucycle/core_math.hpp"
#include "pucycle/nets.hpp"
#include "pucycle/trajgen.hpp"

namespace pucycle {

/// How the update head's raw gain output is squashed. Sigmoid keeps the
/// gain in (0,1) as a proper convex-combination weight; softplus is kept
/// selectable for comparison even though it can exceed 1.
enum class GainSquash { Sigmoid, Softplus };

struct PriorState {
    Gaussian2D g;
};

struct PosteriorState {
    Gaussian2D g;
};

struct GainPair {
    Vec2 k_obs;
    Vec2 k_pred() const { return {1.0 - k_obs.x, 1.0 - k_obs.y}; }
};

struct TraceStep {
    int m = 1;
    int k_miss = 0;           // consecutive masked steps up to and including this one
    Vec2 obs;                 // observation as fed ((0,0) placeholder when masked)
    bool has_prior = false;   // false only for the initialization step
    Gaussian2D prior;
    Gaussian2D posterior;
    Vec2 k_obs;               // valid when has_prior
};

struct FilterTrace {
    std::vector<TraceStep> steps;
    int length() const { return static_cast<int>(steps.size()); }
};

struct CycleConfig {
    GainSquash gain_squash = GainSquash::Sigmoid;
    /// Std of the isotropic step-0 posterior (the observation-noise level);
    /// floored at 1e-3 so the covariance stays SPD for noise-free data.
    double init_sigma = 0.01;
};

inline constexpr int kPredictionInDim = 3;  // x*m, y*m, m
inline constexpr int kUpdateInDim = 8;      // prior mean (2), prior cov (3), z*m (2), m
inline constexpr int kHeadOutDim = 5;       // mean or gain (2) + Cholesky raw (3)

SequenceNet make_prediction_net(LayerSizes sizes = {});
SequenceNet make_update_net(LayerSizes sizes = {});

/// One prediction step: embeds (posterior mean * m_prev, m_prev), advances
/// the LSTM, reads the prior Gaussian off the head.
PriorState prediction_step(const SequenceNet& net, LSTMState& state,
                           const PosteriorState& post_prev, int m_prev);

struct UpdateResult {
    PosteriorState post;
    GainPair gain;
};

/// One update step: embeds (prior mean, prior cov, z*m, m), advances the
/// LSTM; the head yields the gain and the posterior covariance, and the
/// posterior mean is the gain-weighted combination of prior mean and z.
/// Requires z == (0,0) when m == 0.
UpdateResult update_step(const SequenceNet& net, LSTMState& state, const PriorState& prior,
                         const Vec2& z, int m, GainSquash squash = GainSquash::Sigmoid);

/// Full filtering pass over one sequence. Step 0 must be observed and
/// initializes the posterior as N(z0, max(init_sigma,1e-3)^2 I); every later
/// step runs prediction then update.
FilterTrace run_cycle(const SequenceNet& pred, const SequenceNet& up,
                      const ObservedSequence& seq, const CycleConfig& cfg);

/// Sum of prior NLLs against ground truth over steps that carry a prior.
double loss_pred(const FilterTrace& trace, const std::vector<Vec2>& gt);

/// Sum of posterior NLLs against ground truth over steps the update network
/// produced; the constant initialization posterior is excluded, mirroring
/// loss_pred and the training graph.
double loss_up(const FilterTrace& trace, const std::vector<Vec2>& gt);

/// Brute-force k_miss recount from the mask (test oracle and CLI checks).
std::vector<int> k_miss_from_mask(const std::vector<std::uint8_t>& mask);

/// CSV export, one row per step with empty prior/gain fields on step 0.
void save_trace_csv(const FilterTrace& trace, const std::vector<Vec2>& gt,
                    const std::string& path);

struct LoadedTrace {
    FilterTrace trace;
    std::vector<Vec2> gt;
};

LoadedTrace load_trace_csv(const std::string& path);

/// --- training graphs ---

/// Teacher-forced prediction unroll: step k consumes (obs_k*m_k, m_k) and its
/// output is scored against gt_{k+1}. Returns the summed-NLL node.
int tape_prediction_teacher_forced(Tape& t, const SequenceNet& pred, int store,
                                   const ObservedSequence& seq);

struct CycleLossNodes {
    int loss_pred = -1;
    int loss_up = -1;
    int total = -1;
};

/// Joint cycle unroll with gradients flowing through the exchanged estimates
/// (full backpropagation through time; no truncation at the exchange).
CycleLossNodes tape_run_cycle(Tape& t, const SequenceNet& pred, int pred_store,
                              const SequenceNet& up, int up_store,
                              const ObservedSequence& seq, const CycleConfig& cfg);

}  // namespace pucycle
