#include "pucycle/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "pucycle/baselines.hpp"
#include "pucycle/cycle.hpp"

namespace pucycle {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

}  // namespace

int checkpoint_in_dim(const std::string& kind) {
    if (kind == "prediction") return kPredictionInDim;
    if (kind == "update") return kUpdateInDim;
    if (kind == "one_to_one" || kind == "encoder") return kBaselineInDim;
    throw std::runtime_error("checkpoint: unknown kind '" + kind + "'");
}

Checkpoint make_checkpoint(const std::string& kind, const ExperimentConfig& cfg,
                           const SequenceNet& net, const Adam& opt, std::int64_t epoch) {
    checkpoint_in_dim(kind);  // validates
    Checkpoint c;
    c.kind = kind;
    c.config = cfg;
    for (std::size_t i = 0; i < net.params().block_count(); ++i) {
        const ParamBlock& b = net.params().block(static_cast<int>(i));
        c.blocks.emplace_back(b.name, b.shape);
    }
    c.params = net.params().flat();
    c.adam_cfg = opt.config();
    c.adam_t = opt.t();
    c.adam_m = opt.m();
    c.adam_v = opt.v();
    c.epoch = epoch;
    c.seed = cfg.seed;
    return c;
}

SequenceNet net_from_checkpoint(const Checkpoint& c) {
    SequenceNet net(checkpoint_in_dim(c.kind), kHeadOutDim, c.config.sizes);
    const ParamStore& ps = net.params();
    if (c.blocks.size() != ps.block_count()) {
        throw std::runtime_error("checkpoint: block count mismatch for kind '" + c.kind + "'");
    }
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        const ParamBlock& b = ps.block(static_cast<int>(i));
        if (c.blocks[i].first != b.name || c.blocks[i].second != b.shape) {
            throw std::runtime_error("checkpoint: block mismatch at '" + c.blocks[i].first + "'");
        }
    }
    if (c.params.size() != ps.size()) {
        throw std::runtime_error("checkpoint: parameter count mismatch");
    }
    net.params().flat() = c.params;
    return net;
}

Adam adam_from_checkpoint(const Checkpoint& c) {
    Adam opt(c.params.size(), c.adam_cfg);
    opt.restore(c.adam_m, c.adam_v, c.adam_t);
    return opt;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
    ordered_json j;
    j["format_version"] = c.format_version;
    j["kind"] = c.kind;
    j["config"] = ordered_json::parse(experiment_config_to_json(c.config));
    ordered_json blocks = ordered_json::array();
    for (const auto& [name, shape] : c.blocks) {
        ordered_json b;
        b["name"] = name;
        b["shape"] = shape;
        blocks.push_back(std::move(b));
    }
    j["blocks"] = std::move(blocks);
    j["params"] = c.params;
    ordered_json opt;
    opt["lr"] = c.adam_cfg.lr;
    opt["beta1"] = c.adam_cfg.beta1;
    opt["beta2"] = c.adam_cfg.beta2;
    opt["eps"] = c.adam_cfg.eps;
    opt["t"] = c.adam_t;
    opt["m"] = c.adam_m;
    opt["v"] = c.adam_v;
    j["optimizer"] = std::move(opt);
    j["epoch"] = c.epoch;
    j["seed"] = c.seed;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_checkpoint: cannot open " + tmp);
        out << j.dump() << '\n';
        if (!out) throw std::runtime_error("save_checkpoint: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("save_checkpoint: rename to " + path + " failed");
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();

    ordered_json j;
    try {
        j = ordered_json::parse(ss.str());
    } catch (const std::exception& e) {
        throw std::runtime_error("load_checkpoint: corrupt file " + path + ": " + e.what());
    }

    Checkpoint c;
    try {
        c.format_version = j.at("format_version").get<int>();
        if (c.format_version != kFormatVersion) {
            throw std::runtime_error("load_checkpoint: format version " +
                                     std::to_string(c.format_version) + " unsupported, expected " +
                                     std::to_string(kFormatVersion));
        }
        c.kind = j.at("kind").get<std::string>();
        c.config = experiment_config_from_json(j.at("config").dump());
        for (const auto& b : j.at("blocks")) {
            c.blocks.emplace_back(b.at("name").get<std::string>(),
                                  b.at("shape").get<std::vector<int>>());
        }
        c.params = j.at("params").get<std::vector<double>>();
        const auto& opt = j.at("optimizer");
        c.adam_cfg.lr = opt.at("lr").get<double>();
        c.adam_cfg.beta1 = opt.at("beta1").get<double>();
        c.adam_cfg.beta2 = opt.at("beta2").get<double>();
        c.adam_cfg.eps = opt.at("eps").get<double>();
        c.adam_t = opt.at("t").get<std::int64_t>();
        c.adam_m = opt.at("m").get<std::vector<double>>();
        c.adam_v = opt.at("v").get<std::vector<double>>();
        c.epoch = j.at("epoch").get<std::int64_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error("load_checkpoint: corrupt file " + path + ": " + e.what());
    }
    if (c.adam_m.size() != c.params.size() || c.adam_v.size() != c.params.size()) {
        throw std::runtime_error("load_checkpoint: corrupt file " + path +
                                 ": optimizer state does not match parameters");
    }
    return c;
}

}  // namespace pucycle
