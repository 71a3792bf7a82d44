#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace pucycle {

/// Deterministic splitmix64 generator. Distributions are implemented here
/// rather than taken from <random> so that streams are reproducible
/// bit-for-bit across standard libraries. Independent substreams are derived
/// from (seed, index), which makes per-trajectory generation order-free.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Stream for item `index` under `seed`; disjoint for distinct indices.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(seed, index));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one draw consumes two uniforms).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const auto n = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(next_u64() % n);
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
            std::swap(items[i - 1], items[j]);
        }
    }

  private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        Rng r(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
        r.next_u64();
        std::uint64_t h = r.next_u64() ^ b;
        Rng r2(h);
        return r2.next_u64();
    }

    std::uint64_t state_;
};

}  // namespace pucycle
