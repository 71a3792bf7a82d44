#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pucycle/adam.hpp"
#include "pucycle/config.hpp"
#include "pucycle/nets.hpp"

namespace pucycle {

/// On-disk model snapshot. Kinds: "prediction", "update", "one_to_one",
/// "encoder" — the kind fixes the network's input width.
struct Checkpoint {
    int format_version = 1;
    std::string kind;
    ExperimentConfig config;
    std::vector<std::pair<std::string, std::vector<int>>> blocks;
    std::vector<double> params;
    AdamConfig adam_cfg;
    std::int64_t adam_t = 0;
    std::vector<double> adam_m;
    std::vector<double> adam_v;
    std::int64_t epoch = 0;
    std::uint64_t seed = 0;
};

int checkpoint_in_dim(const std::string& kind);  // throws on unknown kind

Checkpoint make_checkpoint(const std::string& kind, const ExperimentConfig& cfg,
                           const SequenceNet& net, const Adam& opt, std::int64_t epoch);

/// Rebuilds the network for c.kind and loads the stored parameters;
/// validates block names/shapes.
SequenceNet net_from_checkpoint(const Checkpoint& c);

Adam adam_from_checkpoint(const Checkpoint& c);

/// Atomic write (temp file + rename). Saving a loaded checkpoint reproduces
/// the file byte for byte.
void save_checkpoint(const Checkpoint& c, const std::string& path);

/// Throws std::runtime_error on unreadable/corrupt files and on format
/// version mismatches (the message names both versions).
Checkpoint load_checkpoint(const std::string& path);

}  // namespace pucycle
