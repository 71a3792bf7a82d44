// pybind11 surface: generation, filtering, training, evaluation, I/O.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pucycle/baselines.hpp"
#include "pucycle/checkpoint.hpp"
#include "pucycle/config.hpp"
#include "pucycle/core_math.hpp"
#include "pucycle/dataset_io.hpp"
#include "pucycle/evaluate.hpp"
#include "pucycle/plots.hpp"
#include "pucycle/train.hpp"

namespace py = pybind11;
using namespace pucycle;

PYBIND11_MODULE(_pucycle, m) {
    m.doc() = "Recurrent prediction-update filtering for 2D trajectories";
    m.attr("__version__") = "0.1.0";

    // --- core math ---
    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("norm", &Vec2::norm)
        .def("__repr__", [](const Vec2& v) {
            return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
        });

    py::class_<Mat2>(m, "Mat2")
        .def(py::init<>())
        .def_readwrite("xx", &Mat2::xx)
        .def_readwrite("xy", &Mat2::xy)
        .def_readwrite("yx", &Mat2::yx)
        .def_readwrite("yy", &Mat2::yy)
        .def("det", &Mat2::det)
        .def("trace", &Mat2::trace)
        .def("spd", &Mat2::spd)
        .def_static("identity", &Mat2::identity)
        .def_static("diag", &Mat2::diag, py::arg("a"), py::arg("b"));

    py::class_<Gaussian2D>(m, "Gaussian2D")
        .def(py::init<>())
        .def_readwrite("mean", &Gaussian2D::mean)
        .def_readwrite("cov", &Gaussian2D::cov);

    py::class_<PrincipalAxes>(m, "PrincipalAxes")
        .def_readonly("major", &PrincipalAxes::major)
        .def_readonly("minor", &PrincipalAxes::minor)
        .def_readonly("angle_rad", &PrincipalAxes::angle_rad);

    m.def("sigmoid", &sigmoid, py::arg("x"));
    m.def("softplus", &softplus, py::arg("x"));
    m.def("gaussian2d_nll", &gaussian2d_nll, py::arg("g"), py::arg("target"));
    m.def("chol_params_to_cov", [](double raw0, double raw1, double raw2) {
        return chol_params_to_cov({raw0, raw1, raw2});
    }, py::arg("raw0"), py::arg("raw1"), py::arg("raw2"));
    m.def("ade", &ade, py::arg("estimates"), py::arg("truths"));
    m.def("mean_and_population_std", &mean_and_population_std, py::arg("values"));
    m.def("principal_axes", &principal_axes, py::arg("cov"));

    // --- rng ---
    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_static("substream", &Rng::substream, py::arg("seed"), py::arg("index"))
        .def("uniform", py::overload_cast<>(&Rng::uniform))
        .def("normal", py::overload_cast<>(&Rng::normal))
        .def("bernoulli", &Rng::bernoulli, py::arg("p"))
        .def("uniform_int", &Rng::uniform_int, py::arg("lo"), py::arg("hi"));

    // --- trajectory generation ---
    py::class_<GeneratorConfig>(m, "GeneratorConfig")
        .def(py::init<>())
        .def_readwrite("fps", &GeneratorConfig::fps)
        .def_readwrite("speed_mean", &GeneratorConfig::speed_mean)
        .def_readwrite("speed_std", &GeneratorConfig::speed_std)
        .def_readwrite("speed_min", &GeneratorConfig::speed_min)
        .def_readwrite("turn_angle_min_deg", &GeneratorConfig::turn_angle_min_deg)
        .def_readwrite("turn_angle_max_deg", &GeneratorConfig::turn_angle_max_deg)
        .def_readwrite("turn_duration_mean_s", &GeneratorConfig::turn_duration_mean_s)
        .def_readwrite("turn_duration_std_s", &GeneratorConfig::turn_duration_std_s)
        .def_readwrite("sigma_w", &GeneratorConfig::sigma_w)
        .def_readwrite("sigma_outl", &GeneratorConfig::sigma_outl)
        .def_readwrite("p_outl", &GeneratorConfig::p_outl)
        .def_readwrite("p_miss", &GeneratorConfig::p_miss)
        .def_readwrite("len_min", &GeneratorConfig::len_min)
        .def_readwrite("len_max", &GeneratorConfig::len_max)
        .def_readwrite("seed", &GeneratorConfig::seed)
        .def("dt", &GeneratorConfig::dt)
        .def("validate", &GeneratorConfig::validate);

    py::class_<Agent>(m, "Agent")
        .def_readwrite("speed", &Agent::speed)
        .def_readwrite("heading0", &Agent::heading0)
        .def_readwrite("turn_angle_deg", &Agent::turn_angle_deg)
        .def_readwrite("turn_start", &Agent::turn_start)
        .def_readwrite("turn_len", &Agent::turn_len)
        .def("turn_angle_rad", &Agent::turn_angle_rad);

    py::class_<GroundTruthTrajectory>(m, "GroundTruthTrajectory")
        .def_readwrite("dt", &GroundTruthTrajectory::dt)
        .def_readwrite("positions", &GroundTruthTrajectory::positions)
        .def_readwrite("agent", &GroundTruthTrajectory::agent)
        .def("__len__", &GroundTruthTrajectory::length);

    py::class_<ObservedSequence>(m, "ObservedSequence")
        .def_readwrite("id", &ObservedSequence::id)
        .def_readwrite("gt", &ObservedSequence::gt)
        .def_readwrite("obs", &ObservedSequence::obs)
        .def_readwrite("mask", &ObservedSequence::mask)
        .def_readwrite("outlier", &ObservedSequence::outlier)
        .def("__len__", &ObservedSequence::length);

    py::class_<Dataset>(m, "Dataset")
        .def_readwrite("train", &Dataset::train)
        .def_readwrite("eval", &Dataset::eval);

    m.def("sample_agent", &sample_agent, py::arg("cfg"), py::arg("length"), py::arg("rng"));
    m.def("simulate", &simulate, py::arg("agent"), py::arg("length"), py::arg("cfg"));
    m.def("observe", &observe, py::arg("gt"), py::arg("cfg"), py::arg("rng"));
    m.def("mask_missing", &mask_missing, py::arg("seq"), py::arg("cfg"), py::arg("rng"));
    m.def("make_sequence", &make_sequence, py::arg("cfg"), py::arg("index"));
    m.def("make_dataset", &make_dataset, py::arg("cfg"), py::arg("n"),
          py::call_guard<py::gil_scoped_release>());
    m.def("save_dataset_jsonl", &save_dataset_jsonl, py::arg("ds"), py::arg("path"));
    m.def("load_dataset_jsonl", &load_dataset_jsonl, py::arg("path"));

    // --- networks ---
    py::class_<LayerSizes>(m, "LayerSizes")
        .def(py::init<>())
        .def(py::init([](int emb_dim, int hidden, int mlp_hidden) {
            return LayerSizes{emb_dim, hidden, mlp_hidden};
        }), py::arg("emb_dim"), py::arg("hidden"), py::arg("mlp_hidden"))
        .def_readwrite("emb_dim", &LayerSizes::emb_dim)
        .def_readwrite("hidden", &LayerSizes::hidden)
        .def_readwrite("mlp_hidden", &LayerSizes::mlp_hidden);

    py::class_<LSTMState>(m, "LSTMState")
        .def_readwrite("h", &LSTMState::h)
        .def_readwrite("c", &LSTMState::c);

    py::class_<SequenceNet>(m, "SequenceNet")
        .def(py::init<int, int, LayerSizes>(), py::arg("in_dim"), py::arg("out_dim"),
             py::arg("sizes") = LayerSizes{})
        .def("init", [](SequenceNet& n, std::uint64_t seed) {
            Rng rng(seed);
            n.init(rng);
        }, py::arg("seed"))
        .def("initial_state", &SequenceNet::initial_state)
        .def("step", [](const SequenceNet& n, LSTMState& state, const std::vector<double>& input) {
            return n.step(state, input);
        }, py::arg("state"), py::arg("input"))
        .def("in_dim", &SequenceNet::in_dim)
        .def("out_dim", &SequenceNet::out_dim)
        .def("param_count", [](const SequenceNet& n) { return n.params().size(); })
        .def("get_params", [](const SequenceNet& n) { return n.params().flat(); })
        .def("set_params", [](SequenceNet& n, const std::vector<double>& flat) {
            if (flat.size() != n.params().size()) {
                throw std::invalid_argument("set_params: wrong parameter count");
            }
            n.params().flat() = flat;
        }, py::arg("flat"));

    m.def("make_prediction_net", &make_prediction_net, py::arg("sizes") = LayerSizes{});
    m.def("make_update_net", &make_update_net, py::arg("sizes") = LayerSizes{});
    m.def("make_baseline_net", &make_baseline_net, py::arg("sizes") = LayerSizes{});

    // --- cycle ---
    py::enum_<GainSquash>(m, "GainSquash")
        .value("Sigmoid", GainSquash::Sigmoid)
        .value("Softplus", GainSquash::Softplus);

    py::class_<CycleConfig>(m, "CycleConfig")
        .def(py::init<>())
        .def_readwrite("gain_squash", &CycleConfig::gain_squash)
        .def_readwrite("init_sigma", &CycleConfig::init_sigma);

    py::class_<TraceStep>(m, "TraceStep")
        .def_readonly("m", &TraceStep::m)
        .def_readonly("k_miss", &TraceStep::k_miss)
        .def_readonly("obs", &TraceStep::obs)
        .def_readonly("has_prior", &TraceStep::has_prior)
        .def_readonly("prior", &TraceStep::prior)
        .def_readonly("posterior", &TraceStep::posterior)
        .def_readonly("k_obs", &TraceStep::k_obs);

    py::class_<FilterTrace>(m, "FilterTrace")
        .def_readonly("steps", &FilterTrace::steps)
        .def("__len__", &FilterTrace::length);

    m.def("run_cycle", &run_cycle, py::arg("pred"), py::arg("up"), py::arg("seq"), py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>());
    m.def("loss_pred", &loss_pred, py::arg("trace"), py::arg("gt"));
    m.def("loss_up", &loss_up, py::arg("trace"), py::arg("gt"));
    m.def("k_miss_from_mask", &k_miss_from_mask, py::arg("mask"));
    m.def("save_trace_csv", &save_trace_csv, py::arg("trace"), py::arg("gt"), py::arg("path"));

    // --- baselines ---
    py::enum_<BaselineKind>(m, "BaselineKind")
        .value("OneToOne", BaselineKind::OneToOne)
        .value("Encoder", BaselineKind::Encoder);

    m.def("one_to_one_forward", &one_to_one_forward, py::arg("net"), py::arg("values"));
    m.def("encoder_forward", &encoder_forward, py::arg("net"), py::arg("values"));
    m.def("impute_with_prediction", &impute_with_prediction, py::arg("seq"), py::arg("pred"));
    m.def("linear_interpolate", &linear_interpolate, py::arg("seq"));

    // --- config / checkpoints ---
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("gen", &ExperimentConfig::gen)
        .def_readwrite("sizes", &ExperimentConfig::sizes)
        .def_readwrite("lr", &ExperimentConfig::lr)
        .def_readwrite("grad_clip", &ExperimentConfig::grad_clip)
        .def_readwrite("epochs_pre_clean", &ExperimentConfig::epochs_pre_clean)
        .def_readwrite("epochs_pre_noisy", &ExperimentConfig::epochs_pre_noisy)
        .def_readwrite("epochs_joint", &ExperimentConfig::epochs_joint)
        .def_readwrite("epochs_baseline", &ExperimentConfig::epochs_baseline)
        .def_readwrite("joint_pred_weight", &ExperimentConfig::joint_pred_weight)
        .def_readwrite("joint_up_weight", &ExperimentConfig::joint_up_weight)
        .def_readwrite("gain_squash", &ExperimentConfig::gain_squash)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def("validate", &ExperimentConfig::validate)
        .def("cycle", &ExperimentConfig::cycle);

    m.def("experiment_config_to_json", &experiment_config_to_json, py::arg("cfg"));
    m.def("experiment_config_from_json", &experiment_config_from_json, py::arg("text"));
    m.def("save_experiment_config", &save_experiment_config, py::arg("cfg"), py::arg("path"));
    m.def("load_experiment_config", &load_experiment_config, py::arg("path"));

    py::class_<AdamConfig>(m, "AdamConfig")
        .def(py::init<>())
        .def_readwrite("lr", &AdamConfig::lr)
        .def_readwrite("beta1", &AdamConfig::beta1)
        .def_readwrite("beta2", &AdamConfig::beta2)
        .def_readwrite("eps", &AdamConfig::eps);

    py::class_<Adam>(m, "Adam")
        .def(py::init<std::size_t, AdamConfig>(), py::arg("n"), py::arg("cfg") = AdamConfig{})
        .def("t", &Adam::t)
        .def("step", [](Adam& opt, std::vector<double> params, const std::vector<double>& grads) {
            opt.step(params, grads);
            return params;
        }, py::arg("params"), py::arg("grads"));

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("format_version", &Checkpoint::format_version)
        .def_readonly("kind", &Checkpoint::kind)
        .def_readonly("config", &Checkpoint::config)
        .def_readonly("params", &Checkpoint::params)
        .def_readonly("epoch", &Checkpoint::epoch)
        .def_readonly("seed", &Checkpoint::seed);

    m.def("make_checkpoint", &make_checkpoint, py::arg("kind"), py::arg("cfg"), py::arg("net"),
          py::arg("opt"), py::arg("epoch"));
    m.def("net_from_checkpoint", &net_from_checkpoint, py::arg("checkpoint"));
    m.def("save_checkpoint", &save_checkpoint, py::arg("checkpoint"), py::arg("path"));
    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

    // --- training / evaluation ---
    py::class_<TrainLog>(m, "TrainLog")
        .def_readonly("epoch_loss", &TrainLog::epoch_loss);

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_readonly("net", &TrainedModel::net)
        .def_readonly("opt", &TrainedModel::opt)
        .def_readonly("epoch", &TrainedModel::epoch);

    py::class_<ConditionModels>(m, "ConditionModels")
        .def_readonly("pred", &ConditionModels::pred)
        .def_readonly("up", &ConditionModels::up)
        .def_readonly("one_to_one", &ConditionModels::one_to_one)
        .def_readonly("encoder", &ConditionModels::encoder)
        .def_readonly("imputer", &ConditionModels::imputer)
        .def_readonly("pretrain_log", &ConditionModels::pretrain_log)
        .def_readonly("joint_log", &ConditionModels::joint_log)
        .def_readonly("one_to_one_log", &ConditionModels::one_to_one_log)
        .def_readonly("encoder_log", &ConditionModels::encoder_log);

    m.def("pretrain_prediction", [](const ExperimentConfig& cfg, const Dataset& ds) {
        TrainLog log;
        TrainedModel model = pretrain_prediction(cfg, ds, &log);
        return py::make_tuple(std::move(model), std::move(log));
    }, py::arg("cfg"), py::arg("ds"));
    m.def("train_condition", &train_condition, py::arg("cfg"), py::arg("ds"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<ResultCell>(m, "ResultCell")
        .def_readonly("p_miss", &ResultCell::p_miss)
        .def_readonly("p_outl", &ResultCell::p_outl)
        .def_readonly("sigma_w", &ResultCell::sigma_w)
        .def_readonly("model", &ResultCell::model)
        .def_readonly("ade_m", &ResultCell::ade_m)
        .def_readonly("sigma_ade_m", &ResultCell::sigma_ade_m);

    m.def("evaluate_cycle", &evaluate_cycle, py::arg("pred"), py::arg("up"), py::arg("eval_set"),
          py::arg("ccfg"), py::call_guard<py::gil_scoped_release>());
    m.def("evaluate_one_to_one", &evaluate_one_to_one, py::arg("net"), py::arg("imputer"),
          py::arg("eval_set"), py::call_guard<py::gil_scoped_release>());
    m.def("evaluate_encoder", &evaluate_encoder, py::arg("net"), py::arg("imputer"),
          py::arg("eval_set"), py::call_guard<py::gil_scoped_release>());
    m.def("evaluate_condition", &evaluate_condition, py::arg("pred"), py::arg("up"),
          py::arg("one_to_one"), py::arg("encoder"), py::arg("imputer"), py::arg("eval_set"),
          py::arg("ccfg"), py::arg("p_miss"), py::arg("p_outl"), py::arg("sigma_w"),
          py::call_guard<py::gil_scoped_release>());
    m.def("gap_errors", &gap_errors, py::arg("values"), py::arg("seq"));
    m.def("save_report_csv", &save_report_csv, py::arg("cells"), py::arg("path"));
    m.def("load_report_csv", &load_report_csv, py::arg("path"));

    // --- plots ---
    m.def("emit_gain_plot", &emit_gain_plot, py::arg("trace"), py::arg("csv_path"),
          py::arg("svg_path"));
    m.def("emit_ellipse_plot", &emit_ellipse_plot, py::arg("trace"), py::arg("gt"),
          py::arg("n_sigma"), py::arg("csv_path"), py::arg("svg_path"));
}
