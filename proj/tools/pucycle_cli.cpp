// Command-line front end: generate / train / eval / filter / plot.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pucycle/checkpoint.hpp"
#include "pucycle/config.hpp"
#include "pucycle/dataset_io.hpp"
#include "pucycle/evaluate.hpp"
#include "pucycle/plots.hpp"
#include "pucycle/train.hpp"

namespace {

using namespace pucycle;

struct GenerateArgs {
    std::uint64_t seed = 0;
    int n = 1000;
    double sigma_w = 0.01;
    double p_outl = 0.0;
    double p_miss = 0.0;
    std::string out;
};

int run_generate(const GenerateArgs& a) {
    GeneratorConfig gen;
    gen.seed = a.seed;
    gen.sigma_w = a.sigma_w;
    gen.p_outl = a.p_outl;
    gen.p_miss = a.p_miss;
    const Dataset ds = make_dataset(gen, a.n);
    save_dataset_jsonl(ds, a.out);
    std::cout << "wrote " << ds.train.size() << " train + " << ds.eval.size() << " eval sequences to "
              << a.out << '\n';
    return 0;
}

struct TrainArgs {
    std::string data;
    std::string config;
    std::string out_dir;
};

void save_curve_csv(const std::string& path, const TrainLog& log) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < log.epoch_loss.size(); ++e) {
        out << e << ',' << log.epoch_loss[e] << '\n';
    }
}

int run_train(const TrainArgs& a) {
    const ExperimentConfig cfg = load_experiment_config(a.config);
    const Dataset ds = load_dataset_jsonl(a.data);
    const ConditionModels models = train_condition(cfg, ds);

    auto path = [&](const char* name) { return a.out_dir + "/" + name; };
    save_checkpoint(make_checkpoint("prediction", cfg, models.pred.net, models.pred.opt,
                                    models.pred.epoch),
                    path("prediction.json"));
    save_checkpoint(make_checkpoint("update", cfg, models.up.net, models.up.opt, models.up.epoch),
                    path("update.json"));
    save_checkpoint(make_checkpoint("one_to_one", cfg, models.one_to_one.net, models.one_to_one.opt,
                                    models.one_to_one.epoch),
                    path("one_to_one.json"));
    save_checkpoint(make_checkpoint("encoder", cfg, models.encoder.net, models.encoder.opt,
                                    models.encoder.epoch),
                    path("encoder.json"));
    save_checkpoint(make_checkpoint("prediction", cfg, models.imputer.net, models.imputer.opt,
                                    models.imputer.epoch),
                    path("imputer.json"));
    save_curve_csv(path("curve_pretrain.csv"), models.pretrain_log);
    save_curve_csv(path("curve_joint.csv"), models.joint_log);
    save_curve_csv(path("curve_one_to_one.csv"), models.one_to_one_log);
    save_curve_csv(path("curve_encoder.csv"), models.encoder_log);
    std::cout << "wrote checkpoints and curves to " << a.out_dir << '\n';
    return 0;
}

struct EvalArgs {
    std::string checkpoints;
    std::string data;
    std::string report;
    bool append = false;
};

int run_eval(const EvalArgs& a) {
    auto path = [&](const char* name) { return a.checkpoints + "/" + name; };
    const Checkpoint cp_pred = load_checkpoint(path("prediction.json"));
    const Checkpoint cp_up = load_checkpoint(path("update.json"));
    const Checkpoint cp_oto = load_checkpoint(path("one_to_one.json"));
    const Checkpoint cp_enc = load_checkpoint(path("encoder.json"));
    const Checkpoint cp_imp = load_checkpoint(path("imputer.json"));

    const SequenceNet pred = net_from_checkpoint(cp_pred);
    const SequenceNet up = net_from_checkpoint(cp_up);
    const SequenceNet oto = net_from_checkpoint(cp_oto);
    const SequenceNet enc = net_from_checkpoint(cp_enc);
    const SequenceNet imputer = net_from_checkpoint(cp_imp);

    const Dataset ds = load_dataset_jsonl(a.data);
    const ExperimentConfig& cfg = cp_pred.config;

    std::vector<ResultCell> cells =
        evaluate_condition(pred, up, oto, enc, imputer, ds.eval, cfg.cycle(), cfg.gen.p_miss,
                           cfg.gen.p_outl, cfg.gen.sigma_w);
    if (a.append && std::ifstream(a.report).good()) {
        std::vector<ResultCell> all = load_report_csv(a.report);
        all.insert(all.end(), cells.begin(), cells.end());
        cells = std::move(all);
    }
    save_report_csv(cells, a.report);
    for (const ResultCell& c : cells) {
        std::cout << c.model << ": ade " << c.ade_m << " m, sigma " << c.sigma_ade_m << " m\n";
    }
    return 0;
}

struct FilterArgs {
    std::string checkpoints;
    std::string data;
    std::string trace;
    int index = 0;
};

int run_filter(const FilterArgs& a) {
    const Checkpoint cp_pred = load_checkpoint(a.checkpoints + "/prediction.json");
    const Checkpoint cp_up = load_checkpoint(a.checkpoints + "/update.json");
    const SequenceNet pred = net_from_checkpoint(cp_pred);
    const SequenceNet up = net_from_checkpoint(cp_up);

    const Dataset ds = load_dataset_jsonl(a.data);
    if (a.index < 0 || a.index >= static_cast<int>(ds.eval.size())) {
        throw std::runtime_error("filter: --index out of range (eval split has " +
                                 std::to_string(ds.eval.size()) + " sequences)");
    }
    const ObservedSequence& seq = ds.eval[static_cast<std::size_t>(a.index)];
    const FilterTrace trace = run_cycle(pred, up, seq, cp_pred.config.cycle());
    save_trace_csv(trace, seq.gt.positions, a.trace);
    std::cout << "wrote trace (" << trace.length() << " steps) to " << a.trace << '\n';
    return 0;
}

struct PlotArgs {
    std::string trace;
    std::string kind;
    std::string out;
};

int run_plot(const PlotArgs& a) {
    const LoadedTrace lt = load_trace_csv(a.trace);
    std::string csv_out = a.out;
    const std::size_t dot = csv_out.find_last_of('.');
    if (dot != std::string::npos) csv_out.resize(dot);
    csv_out += ".csv";
    if (a.kind == "gain") {
        emit_gain_plot(lt.trace, csv_out, a.out);
    } else {
        emit_ellipse_plot(lt.trace, lt.gt, 3.0, csv_out, a.out);
    }
    std::cout << "wrote " << a.out << " and " << csv_out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recurrent prediction-update filtering for 2D trajectories"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    CLI::App* gen = app.add_subcommand("generate", "Sample a trajectory dataset (JSON lines)");
    gen->add_option("--seed", gen_args.seed, "Dataset seed");
    gen->add_option("--n", gen_args.n, "Number of trajectories");
    gen->add_option("--sigma-w", gen_args.sigma_w, "Nominal observation noise (m)");
    gen->add_option("--p-outl", gen_args.p_outl, "Outlier probability per step");
    gen->add_option("--p-miss", gen_args.p_miss, "Missing probability per step");
    gen->add_option("--out", gen_args.out, "Output JSONL path")->required();

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Train cycle and baseline models");
    train->add_option("--data", train_args.data, "Dataset JSONL")->required();
    train->add_option("--config", train_args.config, "Experiment config JSON")->required();
    train->add_option("--out-dir", train_args.out_dir, "Checkpoint output directory")->required();

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate checkpoints on a dataset's eval split");
    eval->add_option("--checkpoints", eval_args.checkpoints, "Checkpoint directory")->required();
    eval->add_option("--data", eval_args.data, "Dataset JSONL")->required();
    eval->add_option("--report", eval_args.report, "Report CSV path")->required();
    eval->add_flag("--append", eval_args.append,
                   "Append to an existing report (multi-seed / multi-condition aggregation)");

    FilterArgs filter_args;
    CLI::App* filter = app.add_subcommand("filter", "Run the filter over one eval sequence");
    filter->add_option("--checkpoints", filter_args.checkpoints, "Checkpoint directory")->required();
    filter->add_option("--data", filter_args.data, "Dataset JSONL")->required();
    filter->add_option("--trace", filter_args.trace, "Trace CSV output path")->required();
    filter->add_option("--index", filter_args.index, "Eval sequence index (default 0)");

    PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plot", "Render a trace as SVG (plus plot CSV)");
    plot->add_option("--trace", plot_args.trace, "Trace CSV from the filter subcommand")->required();
    plot->add_option("--kind", plot_args.kind, "gain | ellipse")
        ->required()
        ->check(CLI::IsMember({"gain", "ellipse"}));
    plot->add_option("--out", plot_args.out, "Output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_generate(gen_args);
        if (train->parsed()) return run_train(train_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (filter->parsed()) return run_filter(filter_args);
        if (plot->parsed()) return run_plot(plot_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
