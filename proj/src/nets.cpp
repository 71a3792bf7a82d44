#include "pucycle/nets.hpp"

#include <cmath>
#include <stdexcept>

namespace pucycle {

std::vector<double> affine_forward(const ParamStore& ps, int w, int b, std::span<const double> x) {
    const ParamBlock& wb = ps.block(w);
    const ParamBlock& bb = ps.block(b);
    if (wb.shape.size() != 2) throw std::invalid_argument("affine_forward: weight block must be 2-D");
    const int rows = wb.shape[0], cols = wb.shape[1];
    if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("affine_forward: input length mismatch");
    if (bb.size != static_cast<std::size_t>(rows)) throw std::invalid_argument("affine_forward: bias length mismatch");
    const double* wv = ps.flat().data() + wb.offset;
    const double* bv = ps.flat().data() + bb.offset;
    std::vector<double> y(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        const double* wr = wv + static_cast<std::size_t>(r) * cols;
        double s = bv[r];
        for (int i = 0; i < cols; ++i) s += wr[i] * x[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(r)] = s;
    }
    return y;
}

std::vector<double> embed_forward(const ParamStore& ps, int w, int b, std::span<const double> x) {
    std::vector<double> y = affine_forward(ps, w, b, x);
    for (double& v : y) v = std::tanh(v);
    return y;
}

std::vector<double> mlp_forward(const ParamStore& ps, int w1, int b1, int w2, int b2,
                                std::span<const double> x) {
    std::vector<double> h = affine_forward(ps, w1, b1, x);
    for (double& v : h) v = std::tanh(v);
    return affine_forward(ps, w2, b2, h);
}

LSTMState lstm_step(const ParamStore& ps, int w, int b, const LSTMState& state,
                    std::span<const double> x) {
    const ParamBlock& wb = ps.block(w);
    if (wb.shape.size() != 2 || wb.shape[0] % 4 != 0) {
        throw std::invalid_argument("lstm_step: weight block must be [4*hidden, in+hidden]");
    }
    const int hidden = wb.shape[0] / 4;
    const int cols = wb.shape[1];
    if (static_cast<int>(state.h.size()) != hidden || static_cast<int>(state.c.size()) != hidden) {
        throw std::invalid_argument("lstm_step: state size mismatch");
    }
    if (static_cast<int>(x.size()) + hidden != cols) {
        throw std::invalid_argument("lstm_step: input length mismatch");
    }

    std::vector<double> xin(static_cast<std::size_t>(cols));
    for (std::size_t i = 0; i < x.size(); ++i) xin[i] = x[i];
    for (int i = 0; i < hidden; ++i) xin[x.size() + static_cast<std::size_t>(i)] = state.h[static_cast<std::size_t>(i)];

    std::vector<double> z = affine_forward(ps, w, b, xin);
    LSTMState out = LSTMState::zero(hidden);
    for (int j = 0; j < hidden; ++j) {
        const double i_g = sigmoid(z[static_cast<std::size_t>(j)]);
        const double f_g = sigmoid(z[static_cast<std::size_t>(hidden + j)]);
        const double g_g = std::tanh(z[static_cast<std::size_t>(2 * hidden + j)]);
        const double o_g = sigmoid(z[static_cast<std::size_t>(3 * hidden + j)]);
        const double c_new = f_g * state.c[static_cast<std::size_t>(j)] + i_g * g_g;
        out.c[static_cast<std::size_t>(j)] = c_new;
        out.h[static_cast<std::size_t>(j)] = o_g * std::tanh(c_new);
    }
    return out;
}

SequenceNet::SequenceNet(int in_dim, int out_dim, LayerSizes sizes)
    : in_dim_(in_dim), out_dim_(out_dim), sizes_(sizes) {
    if (in_dim <= 0 || out_dim <= 0) throw std::invalid_argument("SequenceNet: non-positive width");
    emb_w_ = params_.add("emb.W", {sizes_.emb_dim, in_dim_});
    emb_b_ = params_.add("emb.b", {sizes_.emb_dim});
    lstm_w_ = params_.add("lstm.W", {4 * sizes_.hidden, sizes_.emb_dim + sizes_.hidden});
    lstm_b_ = params_.add("lstm.b", {4 * sizes_.hidden});
    head_w1_ = params_.add("head.W1", {sizes_.mlp_hidden, sizes_.hidden});
    head_b1_ = params_.add("head.b1", {sizes_.mlp_hidden});
    head_w2_ = params_.add("head.W2", {out_dim_, sizes_.mlp_hidden});
    head_b2_ = params_.add("head.b2", {out_dim_});
}

void SequenceNet::init(Rng& rng) {
    params_.init_uniform(emb_w_, rng);
    params_.fill(emb_b_, 0.0);
    params_.init_uniform(lstm_w_, rng);
    params_.fill(lstm_b_, 0.0);
    auto lstm_bias = params_.values(lstm_b_);
    for (int j = 0; j < sizes_.hidden; ++j) {
        lstm_bias[static_cast<std::size_t>(sizes_.hidden + j)] = 1.0;  // forget gate open at start
    }
    params_.init_uniform(head_w1_, rng);
    params_.fill(head_b1_, 0.0);
    params_.init_uniform(head_w2_, rng);
    params_.fill(head_b2_, 0.0);
}

std::vector<double> SequenceNet::step(LSTMState& state, std::span<const double> input) const {
    const std::vector<double> e = embed_forward(params_, emb_w_, emb_b_, input);
    state = lstm_step(params_, lstm_w_, lstm_b_, state, e);
    return mlp_forward(params_, head_w1_, head_b1_, head_w2_, head_b2_, state.h);
}

SequenceNet::TapeState SequenceNet::tape_initial_state(Tape& t) const {
    TapeState s;
    s.h = t.zeros(sizes_.hidden);
    s.c = t.zeros(sizes_.hidden);
    return s;
}

int SequenceNet::tape_step(Tape& t, int store_index, TapeState& state, int input) const {
    const int e = t.unary(UnaryKind::Tanh, t.affine(store_index, emb_w_, emb_b_, input));
    const int z = t.affine(store_index, lstm_w_, lstm_b_, t.concat({e, state.h}));
    const int H = sizes_.hidden;
    const int i_g = t.unary(UnaryKind::Sigmoid, t.slice(z, 0, H));
    const int f_g = t.unary(UnaryKind::Sigmoid, t.slice(z, H, H));
    const int g_g = t.unary(UnaryKind::Tanh, t.slice(z, 2 * H, H));
    const int o_g = t.unary(UnaryKind::Sigmoid, t.slice(z, 3 * H, H));
    const int c_new = t.add(t.mul(f_g, state.c), t.mul(i_g, g_g));
    const int h_new = t.mul(o_g, t.unary(UnaryKind::Tanh, c_new));
    state.h = h_new;
    state.c = c_new;
    const int hid = t.unary(UnaryKind::Tanh, t.affine(store_index, head_w1_, head_b1_, h_new));
    return t.affine(store_index, head_w2_, head_b2_, hid);
}

}  // namespace pucycle
