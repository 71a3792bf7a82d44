#include "pucycle/cycle.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pucycle {

namespace {

Gaussian2D head_to_gaussian(const std::vector<double>& out) {
    Gaussian2D g;
    g.mean = {out[0], out[1]};
    g.cov = chol_params_to_cov({out[2], out[3], out[4]});
    return g;
}

double squash_gain(double raw, GainSquash squash) {
    return squash == GainSquash::Sigmoid ? sigmoid(raw) : softplus(raw);
}

void check_mask_bit(int m, const char* what) {
    if (m != 0 && m != 1) throw std::invalid_argument(std::string(what) + ": mask bit must be 0 or 1");
}

}  // namespace

SequenceNet make_prediction_net(LayerSizes sizes) {
    return SequenceNet(kPredictionInDim, kHeadOutDim, sizes);
}

SequenceNet make_update_net(LayerSizes sizes) {
    return SequenceNet(kUpdateInDim, kHeadOutDim, sizes);
}

PriorState prediction_step(const SequenceNet& net, LSTMState& state,
                           const PosteriorState& post_prev, int m_prev) {
    check_mask_bit(m_prev, "prediction_step");
    const double md = static_cast<double>(m_prev);
    const std::array<double, 3> in{post_prev.g.mean.x * md, post_prev.g.mean.y * md, md};
    return {head_to_gaussian(net.step(state, in))};
}

UpdateResult update_step(const SequenceNet& net, LSTMState& state, const PriorState& prior,
                         const Vec2& z, int m, GainSquash squash) {
    check_mask_bit(m, "update_step");
    if (m == 0 && (z.x != 0.0 || z.y != 0.0)) {
        throw std::invalid_argument("update_step: masked step must carry the (0,0) placeholder");
    }
    const double md = static_cast<double>(m);
    const std::array<double, 8> in{prior.g.mean.x, prior.g.mean.y,
                                   prior.g.cov.xx, prior.g.cov.xy, prior.g.cov.yy,
                                   z.x * md,       z.y * md,       md};
    const std::vector<double> out = net.step(state, in);

    UpdateResult r;
    r.gain.k_obs = {squash_gain(out[0], squash), squash_gain(out[1], squash)};
    const Vec2 k_obs = r.gain.k_obs;
    const Vec2 k_pred = r.gain.k_pred();
    r.post.g.mean = {k_pred.x * prior.g.mean.x + k_obs.x * z.x,
                     k_pred.y * prior.g.mean.y + k_obs.y * z.y};
    r.post.g.cov = chol_params_to_cov({out[2], out[3], out[4]});
    return r;
}

FilterTrace run_cycle(const SequenceNet& pred, const SequenceNet& up,
                      const ObservedSequence& seq, const CycleConfig& cfg) {
    const int n = seq.length();
    if (n < 1) throw std::invalid_argument("run_cycle: empty sequence");
    if (seq.mask[0] != 1) throw std::invalid_argument("run_cycle: step 0 must be observed");

    FilterTrace trace;
    trace.steps.resize(static_cast<std::size_t>(n));

    const double s0 = std::max(cfg.init_sigma, 1e-3);
    TraceStep& first = trace.steps[0];
    first.m = 1;
    first.k_miss = 0;
    first.obs = seq.obs[0];
    first.posterior = {seq.obs[0], Mat2::diag(s0 * s0, s0 * s0)};

    LSTMState pred_state = pred.initial_state();
    LSTMState up_state = up.initial_state();
    PosteriorState post{first.posterior};

    for (int k = 1; k < n; ++k) {
        const int m_prev = seq.mask[static_cast<std::size_t>(k - 1)];
        const int m = seq.mask[static_cast<std::size_t>(k)];
        const Vec2 z = seq.obs[static_cast<std::size_t>(k)];

        const PriorState prior = prediction_step(pred, pred_state, post, m_prev);
        const UpdateResult upd = update_step(up, up_state, prior, z, m, cfg.gain_squash);
        post = upd.post;

        TraceStep& ts = trace.steps[static_cast<std::size_t>(k)];
        ts.m = m;
        ts.k_miss = m == 1 ? 0 : trace.steps[static_cast<std::size_t>(k - 1)].k_miss + 1;
        ts.obs = z;
        ts.has_prior = true;
        ts.prior = prior.g;
        ts.posterior = post.g;
        ts.k_obs = upd.gain.k_obs;
    }
    return trace;
}

double loss_pred(const FilterTrace& trace, const std::vector<Vec2>& gt) {
    if (gt.size() != trace.steps.size()) throw std::invalid_argument("loss_pred: trace/gt misalignment");
    double total = 0.0;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        if (!trace.steps[k].has_prior) continue;
        total += gaussian2d_nll(trace.steps[k].prior, gt[k]);
    }
    return total;
}

double loss_up(const FilterTrace& trace, const std::vector<Vec2>& gt) {
    if (gt.size() != trace.steps.size()) throw std::invalid_argument("loss_up: trace/gt misalignment");
    double total = 0.0;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        if (!trace.steps[k].has_prior) continue;  // init step is a constant, not a model output
        total += gaussian2d_nll(trace.steps[k].posterior, gt[k]);
    }
    return total;
}

std::vector<int> k_miss_from_mask(const std::vector<std::uint8_t>& mask) {
    std::vector<int> out(mask.size(), 0);
    for (std::size_t k = 0; k < mask.size(); ++k) {
        out[k] = mask[k] == 1 ? 0 : (k == 0 ? 1 : out[k - 1] + 1);
    }
    return out;
}

void save_trace_csv(const FilterTrace& trace, const std::vector<Vec2>& gt,
                    const std::string& path) {
    if (gt.size() != trace.steps.size()) {
        throw std::invalid_argument("save_trace_csv: trace/gt misalignment");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_trace_csv: cannot open " + path);
    out << "step,m,k_miss,obs_x,obs_y,prior_x,prior_y,prior_cov_xx,prior_cov_xy,prior_cov_yy,"
           "post_x,post_y,post_cov_xx,post_cov_xy,post_cov_yy,k_obs_x,k_obs_y,gt_x,gt_y\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const TraceStep& ts = trace.steps[k];
        out << k << ',' << ts.m << ',' << ts.k_miss << ',' << num(ts.obs.x) << ',' << num(ts.obs.y) << ',';
        if (ts.has_prior) {
            out << num(ts.prior.mean.x) << ',' << num(ts.prior.mean.y) << ','
                << num(ts.prior.cov.xx) << ',' << num(ts.prior.cov.xy) << ',' << num(ts.prior.cov.yy) << ',';
        } else {
            out << ",,,,,";
        }
        out << num(ts.posterior.mean.x) << ',' << num(ts.posterior.mean.y) << ','
            << num(ts.posterior.cov.xx) << ',' << num(ts.posterior.cov.xy) << ','
            << num(ts.posterior.cov.yy) << ',';
        if (ts.has_prior) {
            out << num(ts.k_obs.x) << ',' << num(ts.k_obs.y) << ',';
        } else {
            out << ",,";
        }
        out << num(gt[k].x) << ',' << num(gt[k].y) << '\n';
    }
    if (!out) throw std::runtime_error("save_trace_csv: write failed for " + path);
}

LoadedTrace load_trace_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_trace_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_trace_csv: empty file " + path);

    LoadedTrace out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 19) {
            throw std::runtime_error("load_trace_csv: malformed row in " + path);
        }
        TraceStep ts;
        ts.m = std::stoi(fields[1]);
        ts.k_miss = std::stoi(fields[2]);
        ts.obs = {std::stod(fields[3]), std::stod(fields[4])};
        ts.has_prior = !fields[5].empty();
        if (ts.has_prior) {
            ts.prior.mean = {std::stod(fields[5]), std::stod(fields[6])};
            ts.prior.cov.xx = std::stod(fields[7]);
            ts.prior.cov.xy = ts.prior.cov.yx = std::stod(fields[8]);
            ts.prior.cov.yy = std::stod(fields[9]);
        }
        ts.posterior.mean = {std::stod(fields[10]), std::stod(fields[11])};
        ts.posterior.cov.xx = std::stod(fields[12]);
        ts.posterior.cov.xy = ts.posterior.cov.yx = std::stod(fields[13]);
        ts.posterior.cov.yy = std::stod(fields[14]);
        if (!fields[15].empty()) ts.k_obs = {std::stod(fields[15]), std::stod(fields[16])};
        out.trace.steps.push_back(ts);
        out.gt.push_back({std::stod(fields[17]), std::stod(fields[18])});
    }
    return out;
}

int tape_prediction_teacher_forced(Tape& t, const SequenceNet& pred, int store,
                                   const ObservedSequence& seq) {
    const int n = seq.length();
    if (n < 2) throw std::invalid_argument("tape_prediction_teacher_forced: need at least 2 steps");
    SequenceNet::TapeState state = pred.tape_initial_state(t);
    int total = -1;
    for (int k = 0; k < n - 1; ++k) {
        const double m = static_cast<double>(seq.mask[static_cast<std::size_t>(k)]);
        const Vec2 z = seq.obs[static_cast<std::size_t>(k)];
        const int in = t.constant({z.x * m, z.y * m, m});
        const int out = pred.tape_step(t, store, state, in);
        const int nll = t.gaussian_nll(t.slice(out, 0, 2), t.slice(out, 2, 3),
                                       seq.gt.positions[static_cast<std::size_t>(k + 1)]);
        total = total < 0 ? nll : t.add(total, nll);
    }
    return total;
}

CycleLossNodes tape_run_cycle(Tape& t, const SequenceNet& pred, int pred_store,
                              const SequenceNet& up, int up_store,
                              const ObservedSequence& seq, const CycleConfig& cfg) {
    const int n = seq.length();
    if (n < 2) throw std::invalid_argument("tape_run_cycle: need at least 2 steps");
    if (seq.mask[0] != 1) throw std::invalid_argument("tape_run_cycle: step 0 must be observed");

    SequenceNet::TapeState pred_state = pred.tape_initial_state(t);
    SequenceNet::TapeState up_state = up.tape_initial_state(t);

    int post_mean = t.constant(seq.obs[0]);
    CycleLossNodes nodes;
    const UnaryKind squash = cfg.gain_squash == GainSquash::Sigmoid ? UnaryKind::Sigmoid
                                                                    : UnaryKind::Softplus;
    for (int k = 1; k < n; ++k) {
        const double m_prev = static_cast<double>(seq.mask[static_cast<std::size_t>(k - 1)]);
        const double m = static_cast<double>(seq.mask[static_cast<std::size_t>(k)]);
        const Vec2 gt = seq.gt.positions[static_cast<std::size_t>(k)];

        const int pred_in = t.concat({t.scale(post_mean, m_prev), t.constant({m_prev})});
        const int pred_out = pred.tape_step(t, pred_store, pred_state, pred_in);
        const int prior_mean = t.slice(pred_out, 0, 2);
        const int prior_raw = t.slice(pred_out, 2, 3);
        const int lp = t.gaussian_nll(prior_mean, prior_raw, gt);
        nodes.loss_pred = nodes.loss_pred < 0 ? lp : t.add(nodes.loss_pred, lp);

        const int z = t.constant(seq.obs[static_cast<std::size_t>(k)]);
        const int up_in = t.concat({prior_mean, t.chol_cov_entries(prior_raw), t.scale(z, m),
                                    t.constant({m})});
        const int up_out = up.tape_step(t, up_store, up_state, up_in);
        const int k_obs = t.unary(squash, t.slice(up_out, 0, 2));
        const int post_raw = t.slice(up_out, 2, 3);
        post_mean = t.add(t.mul(t.one_minus(k_obs), prior_mean), t.mul(k_obs, z));
        const int lu = t.gaussian_nll(post_mean, post_raw, gt);
        nodes.loss_up = nodes.loss_up < 0 ? lu : t.add(nodes.loss_up, lu);
    }
    nodes.total = t.add(nodes.loss_pred, nodes.loss_up);
    return nodes;
}

}  // namespace pucycle
