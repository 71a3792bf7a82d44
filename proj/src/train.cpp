#include "pucycle/train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pucycle {

namespace {

// Substream tags so each consumer of cfg.seed draws independently.
constexpr std::uint64_t kPredInitStream = 0x9000000000000001ULL;
constexpr std::uint64_t kUpInitStream = 0x9000000000000002ULL;
constexpr std::uint64_t kOneToOneInitStream = 0x9000000000000003ULL;
constexpr std::uint64_t kEncoderInitStream = 0x9000000000000004ULL;
constexpr std::uint64_t kPretrainOrderStream = 0x9000000000000011ULL;
constexpr std::uint64_t kJointOrderStream = 0x9000000000000012ULL;
constexpr std::uint64_t kOneToOneOrderStream = 0x9000000000000013ULL;
constexpr std::uint64_t kEncoderOrderStream = 0x9000000000000014ULL;

void log_epoch(TrainLog* log, double mean_loss, const char* phase) {
    if (!std::isfinite(mean_loss)) {
        throw std::runtime_error(std::string(phase) + ": non-finite training loss");
    }
    if (log) log->epoch_loss.push_back(mean_loss);
}

std::vector<std::size_t> index_order(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
}

}  // namespace

ObservedSequence to_noise_free(const ObservedSequence& seq) {
    ObservedSequence clean = seq;
    clean.obs = seq.gt.positions;
    clean.mask.assign(seq.mask.size(), 1);
    clean.outlier.assign(seq.outlier.size(), 0);
    return clean;
}

TrainedModel pretrain_prediction(const ExperimentConfig& cfg, const Dataset& ds, TrainLog* log) {
    cfg.validate();
    if (ds.train.empty()) throw std::invalid_argument("pretrain_prediction: empty training set");

    Rng init_rng = Rng::substream(cfg.seed, kPredInitStream);
    SequenceNet net = make_prediction_net(cfg.sizes);
    net.init(init_rng);
    Adam opt(net.params().size(), cfg.adam());

    std::vector<ObservedSequence> clean;
    clean.reserve(ds.train.size());
    for (const ObservedSequence& s : ds.train) clean.push_back(to_noise_free(s));

    Rng order_rng = Rng::substream(cfg.seed, kPretrainOrderStream);
    Tape tape({&net.params()});
    std::vector<double> grad;
    std::int64_t epoch = 0;

    auto run_phase = [&](const std::vector<ObservedSequence>& data, int epochs, const char* phase) {
        std::vector<std::size_t> order = index_order(data.size());
        for (int e = 0; e < epochs; ++e, ++epoch) {
            order_rng.shuffle(order);
            double total = 0.0;
            for (std::size_t idx : order) {
                tape.reset();
                const int loss = tape_prediction_teacher_forced(tape, net, 0, data[idx]);
                total += tape.value(loss)[0];
                const auto& grads = tape.backward(loss);
                grad.assign(grads[0].begin(), grads[0].end());
                clip_global_norm(grad, cfg.grad_clip);
                opt.step(net.params().flat(), grad);
            }
            log_epoch(log, total / static_cast<double>(data.size()), phase);
        }
    };

    run_phase(clean, cfg.epochs_pre_clean, "pretrain (noise-free)");
    run_phase(ds.train, cfg.epochs_pre_noisy, "pretrain (noisy)");
    return {std::move(net), std::move(opt), epoch};
}

JointModels joint_train(const ExperimentConfig& cfg, const Dataset& ds, TrainedModel pretrained,
                        TrainLog* log) {
    cfg.validate();
    if (ds.train.empty()) throw std::invalid_argument("joint_train: empty training set");

    Rng init_rng = Rng::substream(cfg.seed, kUpInitStream);
    SequenceNet up = make_update_net(cfg.sizes);
    up.init(init_rng);
    Adam opt_up(up.params().size(), cfg.adam());

    SequenceNet& pred = pretrained.net;
    Adam& opt_pred = pretrained.opt;

    const CycleConfig ccfg = cfg.cycle();
    Rng order_rng = Rng::substream(cfg.seed, kJointOrderStream);
    Tape tape({&pred.params(), &up.params()});
    std::vector<double> grad_pred, grad_up;
    std::vector<std::size_t> order = index_order(ds.train.size());
    std::int64_t epoch = pretrained.epoch;

    for (int e = 0; e < cfg.epochs_joint; ++e, ++epoch) {
        order_rng.shuffle(order);
        double total = 0.0;
        for (std::size_t idx : order) {
            tape.reset();
            const CycleLossNodes nodes =
                tape_run_cycle(tape, pred, 0, up, 1, ds.train[idx], ccfg);
            const int loss = tape.add(tape.scale(nodes.loss_pred, cfg.joint_pred_weight),
                                      tape.scale(nodes.loss_up, cfg.joint_up_weight));
            total += tape.value(loss)[0];
            const auto& grads = tape.backward(loss);
            grad_pred.assign(grads[0].begin(), grads[0].end());
            grad_up.assign(grads[1].begin(), grads[1].end());
            clip_global_norm(grad_pred, cfg.grad_clip);
            clip_global_norm(grad_up, cfg.grad_clip);
            opt_pred.step(pred.params().flat(), grad_pred);
            opt_up.step(up.params().flat(), grad_up);
        }
        log_epoch(log, total / static_cast<double>(ds.train.size()), "joint");
    }

    JointModels out{{std::move(pred), std::move(opt_pred), epoch},
                    {std::move(up), std::move(opt_up), epoch}};
    return out;
}

TrainedModel train_baseline(const ExperimentConfig& cfg, const Dataset& ds, BaselineKind kind,
                            const SequenceNet& imputer, TrainLog* log) {
    cfg.validate();
    if (ds.train.empty()) throw std::invalid_argument("train_baseline: empty training set");

    const bool encoder = kind == BaselineKind::Encoder;
    Rng init_rng = Rng::substream(cfg.seed, encoder ? kEncoderInitStream : kOneToOneInitStream);
    SequenceNet net = make_baseline_net(cfg.sizes);
    net.init(init_rng);
    Adam opt(net.params().size(), cfg.adam());

    std::vector<std::vector<Vec2>> values;
    values.reserve(ds.train.size());
    for (const ObservedSequence& s : ds.train) values.push_back(impute_with_prediction(s, imputer));

    Rng order_rng =
        Rng::substream(cfg.seed, encoder ? kEncoderOrderStream : kOneToOneOrderStream);
    Tape tape({&net.params()});
    std::vector<double> grad;
    std::vector<std::size_t> order = index_order(ds.train.size());
    std::int64_t epoch = 0;

    for (int e = 0; e < cfg.epochs_baseline; ++e, ++epoch) {
        order_rng.shuffle(order);
        double total = 0.0;
        for (std::size_t idx : order) {
            const ObservedSequence& seq = ds.train[idx];
            tape.reset();
            const int loss = encoder
                ? tape_encoder(tape, net, 0, values[idx], seq.gt.positions.back())
                : tape_one_to_one(tape, net, 0, values[idx], seq.gt.positions);
            total += tape.value(loss)[0];
            const auto& grads = tape.backward(loss);
            grad.assign(grads[0].begin(), grads[0].end());
            clip_global_norm(grad, cfg.grad_clip);
            opt.step(net.params().flat(), grad);
        }
        log_epoch(log, total / static_cast<double>(ds.train.size()),
                  encoder ? "encoder" : "one_to_one");
    }
    return {std::move(net), std::move(opt), epoch};
}

ConditionModels train_condition(const ExperimentConfig& cfg, const Dataset& ds) {
    TrainLog pretrain_log, joint_log, oto_log, enc_log;
    TrainedModel pre = pretrain_prediction(cfg, ds, &pretrain_log);

    // Imputation and the baselines condition on observations, which is what
    // the pretrained network saw; the jointly trained one expects posteriors.
    TrainedModel imputer = pre;

    JointModels joint = joint_train(cfg, ds, std::move(pre), &joint_log);
    TrainedModel oto = train_baseline(cfg, ds, BaselineKind::OneToOne, imputer.net, &oto_log);
    TrainedModel enc = train_baseline(cfg, ds, BaselineKind::Encoder, imputer.net, &enc_log);
    return {std::move(joint.pred),   std::move(joint.up),  std::move(oto),
            std::move(enc),          std::move(imputer),   std::move(pretrain_log),
            std::move(joint_log),    std::move(oto_log),   std::move(enc_log)};
}

}  // namespace pucycle
