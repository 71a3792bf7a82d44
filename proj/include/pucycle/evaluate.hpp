#pragma once

#include <string>
#include <vector>

#include "pucycle/baselines.hpp"
#include "pucycle/cycle.hpp"
#include "pucycle/trajgen.hpp"

namespace pucycle {

struct ResultCell {
    double p_miss = 0.0;
    double p_outl = 0.0;
    double sigma_w = 0.0;
    std::string model;  // "cycle" | "one_to_one" | "encoder"
    double ade_m = 0.0;
    double sigma_ade_m = 0.0;
};

/// ADE over all posterior means, pooled across steps of all sequences.
std::pair<double, double> evaluate_cycle(const SequenceNet& pred, const SequenceNet& up,
                                         const std::vector<ObservedSequence>& eval_set,
                                         const CycleConfig& ccfg);

/// ADE over per-step estimates on imputed inputs, pooled across steps.
std::pair<double, double> evaluate_one_to_one(const SequenceNet& net, const SequenceNet& imputer,
                                              const std::vector<ObservedSequence>& eval_set);

/// Final-position error per sequence, pooled across sequences (the encoder
/// emits one estimate, so its ADE is a final-step error).
std::pair<double, double> evaluate_encoder(const SequenceNet& net, const SequenceNet& imputer,
                                           const std::vector<ObservedSequence>& eval_set);

/// Euclidean error against ground truth at masked steps only.
std::vector<double> gap_errors(const std::vector<Vec2>& values, const ObservedSequence& seq);

/// The three report rows (cycle, one_to_one, encoder) of one condition; a
/// grid report is the concatenation over all conditions.
std::vector<ResultCell> evaluate_condition(const SequenceNet& pred, const SequenceNet& up,
                                           const SequenceNet& one_to_one, const SequenceNet& encoder,
                                           const SequenceNet& imputer,
                                           const std::vector<ObservedSequence>& eval_set,
                                           const CycleConfig& ccfg, double p_miss, double p_outl,
                                           double sigma_w);

void save_report_csv(const std::vector<ResultCell>& cells, const std::string& path);

std::vector<ResultCell> load_report_csv(const std::string& path);

}  // namespace pucycle
