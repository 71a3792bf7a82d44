#include "pucycle/baselines.hpp"

#include <array>
#include <stdexcept>

namespace pucycle {

SequenceNet make_baseline_net(LayerSizes sizes) {
    return SequenceNet(kBaselineInDim, kHeadOutDim, sizes);
}

std::vector<Gaussian2D> one_to_one_forward(const SequenceNet& net, const std::vector<Vec2>& values) {
    std::vector<Gaussian2D> out;
    out.reserve(values.size());
    LSTMState state = net.initial_state();
    for (const Vec2& v : values) {
        const std::array<double, 2> in{v.x, v.y};
        const std::vector<double> o = net.step(state, in);
        out.push_back({{o[0], o[1]}, chol_params_to_cov({o[2], o[3], o[4]})});
    }
    return out;
}

Gaussian2D encoder_forward(const SequenceNet& net, const std::vector<Vec2>& values) {
    if (values.empty()) throw std::invalid_argument("encoder_forward: empty sequence");
    Gaussian2D last{};
    LSTMState state = net.initial_state();
    for (const Vec2& v : values) {
        const std::array<double, 2> in{v.x, v.y};
        const std::vector<double> o = net.step(state, in);
        last = {{o[0], o[1]}, chol_params_to_cov({o[2], o[3], o[4]})};
    }
    return last;
}

int tape_one_to_one(Tape& t, const SequenceNet& net, int store,
                    const std::vector<Vec2>& values, const std::vector<Vec2>& gt) {
    if (values.empty() || values.size() != gt.size()) {
        throw std::invalid_argument("tape_one_to_one: sequences must be nonempty and aligned");
    }
    SequenceNet::TapeState state;
    state = net.tape_initial_state(t);
    int total = -1;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const int in = t.constant(values[k]);
        const int out = net.tape_step(t, store, state, in);
        const int nll = t.gaussian_nll(t.slice(out, 0, 2), t.slice(out, 2, 3), gt[k]);
        total = total < 0 ? nll : t.add(total, nll);
    }
    return total;
}

int tape_encoder(Tape& t, const SequenceNet& net, int store,
                 const std::vector<Vec2>& values, const Vec2& gt_final) {
    if (values.empty()) throw std::invalid_argument("tape_encoder: empty sequence");
    SequenceNet::TapeState state = net.tape_initial_state(t);
    int out = -1;
    for (const Vec2& v : values) {
        out = net.tape_step(t, store, state, t.constant(v));
    }
    return t.gaussian_nll(t.slice(out, 0, 2), t.slice(out, 2, 3), gt_final);
}

std::vector<Vec2> impute_with_prediction(const ObservedSequence& seq, const SequenceNet& pred) {
    std::vector<Vec2> values = seq.obs;
    const int n = seq.length();
    LSTMState state = pred.initial_state();
    for (int k = 1; k < n; ++k) {
        const double m_prev = static_cast<double>(seq.mask[static_cast<std::size_t>(k - 1)]);
        const Vec2 prev = seq.obs[static_cast<std::size_t>(k - 1)];
        const std::array<double, 3> in{prev.x * m_prev, prev.y * m_prev, m_prev};
        const std::vector<double> o = pred.step(state, in);
        if (seq.mask[static_cast<std::size_t>(k)] == 0) {
            values[static_cast<std::size_t>(k)] = {o[0], o[1]};
        }
    }
    return values;
}

std::vector<Vec2> linear_interpolate(const ObservedSequence& seq) {
    const int n = seq.length();
    if (n == 0) return {};
    if (seq.mask[0] != 1) throw std::invalid_argument("linear_interpolate: step 0 must be observed");
    std::vector<Vec2> values = seq.obs;
    int k = 1;
    while (k < n) {
        if (seq.mask[static_cast<std::size_t>(k)] == 1) {
            ++k;
            continue;
        }
        const int gap_start = k;
        while (k < n && seq.mask[static_cast<std::size_t>(k)] == 0) ++k;
        const int gap_end = k;  // one past the gap
        const Vec2 left = values[static_cast<std::size_t>(gap_start - 1)];
        if (gap_end == n) {
            for (int i = gap_start; i < gap_end; ++i) values[static_cast<std::size_t>(i)] = left;
        } else {
            const Vec2 right = values[static_cast<std::size_t>(gap_end)];
            const double span = static_cast<double>(gap_end - (gap_start - 1));
            for (int i = gap_start; i < gap_end; ++i) {
                const double f = static_cast<double>(i - (gap_start - 1)) / span;
                values[static_cast<std::size_t>(i)] = left + (right - left) * f;
            }
        }
    }
    return values;
}

}  // namespace pucycle
