#pragma once

#include <string>
#include <vector>

#include "pucycle/trajgen.hpp"

namespace pucycle {

/// JSON Lines, one trajectory per line:
///   {"id":…, "dt":…, "gt":[[x,y],…], "obs":[[x,y],…], "mask":[0|1,…],
///    "outlier":[0|1,…], "meta":{"speed":…, "turn_angle_deg":…,
///    "turn_start":…, "turn_len":…}}
/// Field order is fixed and numbers round-trip exactly, so saving a loaded
/// file reproduces it byte for byte.
void save_sequences_jsonl(const std::vector<ObservedSequence>& seqs, const std::string& path);

std::vector<ObservedSequence> load_sequences_jsonl(const std::string& path);

/// Dataset files hold train rows first, then eval rows; the boundary is
/// floor(0.8 n) by row index.
void save_dataset_jsonl(const Dataset& ds, const std::string& path);

Dataset load_dataset_jsonl(const std::string& path);

}  // namespace pucycle
