#include "pucycle/params.hpp"

#include <cmath>
#include <stdexcept>

namespace pucycle {

int ParamStore::add(std::string name, std::vector<int> shape) {
    if (index_.count(name) != 0) {
        throw std::invalid_argument("ParamStore::add: duplicate block name " + name);
    }
    std::size_t size = 1;
    for (int d : shape) {
        if (d <= 0) throw std::invalid_argument("ParamStore::add: non-positive dimension");
        size *= static_cast<std::size_t>(d);
    }
    ParamBlock blk{std::move(name), std::move(shape), flat_.size(), size};
    const int id = static_cast<int>(blocks_.size());
    index_.emplace(blk.name, id);
    blocks_.push_back(std::move(blk));
    flat_.resize(flat_.size() + size, 0.0);
    return id;
}

int ParamStore::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
}

std::span<double> ParamStore::values(int id) {
    const auto& b = block(id);
    return {flat_.data() + b.offset, b.size};
}

std::span<const double> ParamStore::values(int id) const {
    const auto& b = block(id);
    return {flat_.data() + b.offset, b.size};
}

void ParamStore::init_uniform(int id, Rng& rng) {
    const auto& b = block(id);
    const double fan_in = static_cast<double>(b.shape.back());
    const double bound = 1.0 / std::sqrt(fan_in);
    for (double& v : values(id)) v = rng.uniform(-bound, bound);
}

void ParamStore::fill(int id, double value) {
    for (double& v : values(id)) v = value;
}

}  // namespace pucycle
