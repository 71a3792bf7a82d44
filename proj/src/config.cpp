#include "pucycle/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pucycle {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json generator_to_json(const GeneratorConfig& g) {
    ordered_json j;
    j["fps"] = g.fps;
    j["speed_mean"] = g.speed_mean;
    j["speed_std"] = g.speed_std;
    j["speed_min"] = g.speed_min;
    j["turn_angle_min_deg"] = g.turn_angle_min_deg;
    j["turn_angle_max_deg"] = g.turn_angle_max_deg;
    j["turn_duration_mean_s"] = g.turn_duration_mean_s;
    j["turn_duration_std_s"] = g.turn_duration_std_s;
    j["sigma_w"] = g.sigma_w;
    j["sigma_outl"] = g.sigma_outl;
    j["p_outl"] = g.p_outl;
    j["p_miss"] = g.p_miss;
    j["len_min"] = g.len_min;
    j["len_max"] = g.len_max;
    j["seed"] = g.seed;
    return j;
}

GeneratorConfig generator_from_json(const ordered_json& j) {
    GeneratorConfig g;
    g.fps = j.at("fps").get<double>();
    g.speed_mean = j.at("speed_mean").get<double>();
    g.speed_std = j.at("speed_std").get<double>();
    g.speed_min = j.at("speed_min").get<double>();
    g.turn_angle_min_deg = j.at("turn_angle_min_deg").get<double>();
    g.turn_angle_max_deg = j.at("turn_angle_max_deg").get<double>();
    g.turn_duration_mean_s = j.at("turn_duration_mean_s").get<double>();
    g.turn_duration_std_s = j.at("turn_duration_std_s").get<double>();
    g.sigma_w = j.at("sigma_w").get<double>();
    g.sigma_outl = j.at("sigma_outl").get<double>();
    g.p_outl = j.at("p_outl").get<double>();
    g.p_miss = j.at("p_miss").get<double>();
    g.len_min = j.at("len_min").get<int>();
    g.len_max = j.at("len_max").get<int>();
    g.seed = j.at("seed").get<std::uint64_t>();
    return g;
}

}  // namespace

void ExperimentConfig::validate() const {
    gen.validate();
    if (lr <= 0.0) throw std::invalid_argument("ExperimentConfig: lr must be positive");
    if (grad_clip <= 0.0) throw std::invalid_argument("ExperimentConfig: grad_clip must be positive");
    if (epochs_pre_clean < 0 || epochs_pre_noisy < 0 || epochs_joint < 0 || epochs_baseline < 0) {
        throw std::invalid_argument("ExperimentConfig: negative epoch count");
    }
    if (sizes.emb_dim <= 0 || sizes.hidden <= 0 || sizes.mlp_hidden <= 0) {
        throw std::invalid_argument("ExperimentConfig: non-positive layer size");
    }
    if (joint_pred_weight < 0.0 || joint_up_weight < 0.0) {
        throw std::invalid_argument("ExperimentConfig: negative loss weight");
    }
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["generator"] = generator_to_json(cfg.gen);
    ordered_json sz;
    sz["emb_dim"] = cfg.sizes.emb_dim;
    sz["hidden"] = cfg.sizes.hidden;
    sz["mlp_hidden"] = cfg.sizes.mlp_hidden;
    j["sizes"] = sz;
    j["lr"] = cfg.lr;
    j["grad_clip"] = cfg.grad_clip;
    j["epochs_pre_clean"] = cfg.epochs_pre_clean;
    j["epochs_pre_noisy"] = cfg.epochs_pre_noisy;
    j["epochs_joint"] = cfg.epochs_joint;
    j["epochs_baseline"] = cfg.epochs_baseline;
    j["joint_pred_weight"] = cfg.joint_pred_weight;
    j["joint_up_weight"] = cfg.joint_up_weight;
    j["gain_squash"] = cfg.gain_squash == GainSquash::Sigmoid ? "sigmoid" : "softplus";
    j["seed"] = cfg.seed;
    return j.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("experiment config: parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.gen = generator_from_json(j.at("generator"));
    const auto& sz = j.at("sizes");
    cfg.sizes.emb_dim = sz.at("emb_dim").get<int>();
    cfg.sizes.hidden = sz.at("hidden").get<int>();
    cfg.sizes.mlp_hidden = sz.at("mlp_hidden").get<int>();
    cfg.lr = j.at("lr").get<double>();
    cfg.grad_clip = j.at("grad_clip").get<double>();
    cfg.epochs_pre_clean = j.at("epochs_pre_clean").get<int>();
    cfg.epochs_pre_noisy = j.at("epochs_pre_noisy").get<int>();
    cfg.epochs_joint = j.at("epochs_joint").get<int>();
    cfg.epochs_baseline = j.at("epochs_baseline").get<int>();
    cfg.joint_pred_weight = j.at("joint_pred_weight").get<double>();
    cfg.joint_up_weight = j.at("joint_up_weight").get<double>();
    const std::string squash = j.at("gain_squash").get<std::string>();
    if (squash == "sigmoid") {
        cfg.gain_squash = GainSquash::Sigmoid;
    } else if (squash == "softplus") {
        cfg.gain_squash = GainSquash::Softplus;
    } else {
        throw std::runtime_error("experiment config: unknown gain_squash '" + squash + "'");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

void save_experiment_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_experiment_config: cannot open " + path);
    out << experiment_config_to_json(cfg) << '\n';
    if (!out) throw std::runtime_error("save_experiment_config: write failed for " + path);
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_experiment_config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return experiment_config_from_json(ss.str());
}

}  // namespace pucycle
