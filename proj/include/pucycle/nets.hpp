#pragma once

#include <span>
#include <vector>

#include "pucycle/params.hpp"
#include "pucycle/rng.hpp"
#include "pucycle/tape.hpp"

namespace pucycle {

struct LayerSizes {
    int emb_dim = 32;
    int hidden = 64;
    int mlp_hidden = 64;
};

struct LSTMState {
    std::vector<double> h;
    std::vector<double> c;

    static LSTMState zero(int hidden) {
        return {std::vector<double>(static_cast<std::size_t>(hidden), 0.0),
                std::vector<double>(static_cast<std::size_t>(hidden), 0.0)};
    }
};

/// y = W x + b against named blocks of a store.
std::vector<double> affine_forward(const ParamStore& ps, int w, int b, std::span<const double> x);

/// Embedding layer: tanh(W x + b).
std::vector<double> embed_forward(const ParamStore& ps, int w, int b, std::span<const double> x);

/// Two-layer perceptron head: W2 tanh(W1 x + b1) + b2.
std::vector<double> mlp_forward(const ParamStore& ps, int w1, int b1, int w2, int b2,
                                std::span<const double> x);

/// One LSTM cell step. The weight block has shape [4*hidden, in+hidden] and
/// acts on [x; h]; gate order is i, f, g, o; no peepholes.
///   c' = f⊙c + i⊙g,  h' = o⊙tanh(c')
LSTMState lstm_step(const ParamStore& ps, int w, int b, const LSTMState& state,
                    std::span<const double> x);

/// One EMB → LSTM → MLP-head network with its own parameter store. All three
/// models in this project are instances with different input/output widths.
class SequenceNet {
  public:
    SequenceNet(int in_dim, int out_dim, LayerSizes sizes);

    /// Uniform(±1/sqrt(fan_in)) weights, zero biases, forget-gate bias 1.
    void init(Rng& rng);

    LSTMState initial_state() const { return LSTMState::zero(sizes_.hidden); }

    /// Plain inference step: advances `state`, returns the head output.
    std::vector<double> step(LSTMState& state, std::span<const double> input) const;

    /// Recurrent node pair while building a training graph.
    struct TapeState {
        int h = -1;
        int c = -1;
    };

    TapeState tape_initial_state(Tape& t) const;

    /// Records one full step on `t` (this net is store `store_index` there);
    /// advances `state` and returns the head-output node.
    int tape_step(Tape& t, int store_index, TapeState& state, int input) const;

    ParamStore& params() { return params_; }
    const ParamStore& params() const { return params_; }
    const LayerSizes& sizes() const { return sizes_; }
    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }

  private:
    int in_dim_;
    int out_dim_;
    LayerSizes sizes_;
    ParamStore params_;
    int emb_w_, emb_b_, lstm_w_, lstm_b_, head_w1_, head_b1_, head_w2_, head_b2_;
};

}  // namespace pucycle
