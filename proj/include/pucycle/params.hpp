#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pucycle/rng.hpp"

namespace pucycle {

struct ParamBlock {
    std::string name;
    std::vector<int> shape;  // row-major; [rows, cols] for matrices, [n] for vectors
    std::size_t offset = 0;
    std::size_t size = 0;
};

/// Flat, named, deterministically ordered storage for all trainable weights
/// of one network. Block ids are indices in registration order.
class ParamStore {
  public:
    /// Registers a block and returns its id. Throws on duplicate names.
    int add(std::string name, std::vector<int> shape);

    int find(std::string_view name) const;  // -1 when absent
    const ParamBlock& block(int id) const { return blocks_.at(static_cast<std::size_t>(id)); }
    std::size_t block_count() const { return blocks_.size(); }

    std::span<double> values(int id);
    std::span<const double> values(int id) const;

    std::vector<double>& flat() { return flat_; }
    const std::vector<double>& flat() const { return flat_; }
    std::size_t size() const { return flat_.size(); }

    /// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) fill; fan_in is the last
    /// shape dimension.
    void init_uniform(int id, Rng& rng);

    void fill(int id, double value);

  private:
    std::vector<ParamBlock> blocks_;
    std::unordered_map<std::string, int> index_;
    std::vector<double> flat_;
};

}  // namespace pucycle
