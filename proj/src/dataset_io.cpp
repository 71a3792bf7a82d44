#include "pucycle/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace pucycle {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json points_to_json(const std::vector<Vec2>& pts) {
    ordered_json arr = ordered_json::array();
    for (const Vec2& p : pts) arr.push_back(ordered_json::array({p.x, p.y}));
    return arr;
}

std::vector<Vec2> points_from_json(const ordered_json& arr) {
    std::vector<Vec2> pts;
    pts.reserve(arr.size());
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2) {
            throw std::runtime_error("dataset: point is not an [x,y] pair");
        }
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return pts;
}

ordered_json sequence_to_json(const ObservedSequence& seq) {
    ordered_json j;
    j["id"] = seq.id;
    j["dt"] = seq.gt.dt;
    j["gt"] = points_to_json(seq.gt.positions);
    j["obs"] = points_to_json(seq.obs);
    j["mask"] = seq.mask;
    j["outlier"] = seq.outlier;
    ordered_json meta;
    meta["speed"] = seq.gt.agent.speed;
    meta["turn_angle_deg"] = seq.gt.agent.turn_angle_deg;
    meta["turn_start"] = seq.gt.agent.turn_start;
    meta["turn_len"] = seq.gt.agent.turn_len;
    j["meta"] = meta;
    return j;
}

ObservedSequence sequence_from_json(const ordered_json& j) {
    ObservedSequence seq;
    seq.id = j.at("id").get<std::uint64_t>();
    seq.gt.dt = j.at("dt").get<double>();
    seq.gt.positions = points_from_json(j.at("gt"));
    seq.obs = points_from_json(j.at("obs"));
    seq.mask = j.at("mask").get<std::vector<std::uint8_t>>();
    seq.outlier = j.at("outlier").get<std::vector<std::uint8_t>>();
    const auto& meta = j.at("meta");
    Agent& a = seq.gt.agent;
    a.speed = meta.at("speed").get<double>();
    a.turn_angle_deg = meta.at("turn_angle_deg").get<double>();
    a.turn_start = meta.at("turn_start").get<int>();
    a.turn_len = meta.at("turn_len").get<int>();
    if (seq.gt.positions.size() >= 2) {
        const Vec2 d = seq.gt.positions[1] - seq.gt.positions[0];
        a.heading0 = std::atan2(d.y, d.x);
    }
    const std::size_t n = seq.gt.positions.size();
    if (seq.obs.size() != n || seq.mask.size() != n || seq.outlier.size() != n) {
        throw std::runtime_error("dataset: sequence arrays disagree in length");
    }
    return seq;
}

}  // namespace

void save_sequences_jsonl(const std::vector<ObservedSequence>& seqs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_sequences_jsonl: cannot open " + path);
    for (const ObservedSequence& seq : seqs) {
        out << sequence_to_json(seq).dump() << '\n';
    }
    if (!out) throw std::runtime_error("save_sequences_jsonl: write failed for " + path);
}

std::vector<ObservedSequence> load_sequences_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_sequences_jsonl: cannot open " + path);
    std::vector<ObservedSequence> seqs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("load_sequences_jsonl: " + path + " line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
        seqs.push_back(sequence_from_json(j));
    }
    return seqs;
}

void save_dataset_jsonl(const Dataset& ds, const std::string& path) {
    std::vector<ObservedSequence> all;
    all.reserve(ds.train.size() + ds.eval.size());
    all.insert(all.end(), ds.train.begin(), ds.train.end());
    all.insert(all.end(), ds.eval.begin(), ds.eval.end());
    save_sequences_jsonl(all, path);
}

Dataset load_dataset_jsonl(const std::string& path) {
    std::vector<ObservedSequence> all = load_sequences_jsonl(path);
    const std::size_t n_train = all.size() * 4 / 5;
    Dataset ds;
    ds.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
    ds.eval.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
    return ds;
}

}  // namespace pucycle
