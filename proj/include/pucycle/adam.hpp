#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pucycle {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Bias-corrected ADAM over one flat parameter vector.
class Adam {
  public:
    explicit Adam(std::size_t n, AdamConfig cfg = {});

    /// params -= lr * m_hat / (sqrt(v_hat) + eps). Throws on length mismatch.
    void step(std::span<double> params, std::span<const double> grads);

    const AdamConfig& config() const { return cfg_; }
    std::int64_t t() const { return t_; }
    std::vector<double>& m() { return m_; }
    std::vector<double>& v() { return v_; }
    const std::vector<double>& m() const { return m_; }
    const std::vector<double>& v() const { return v_; }
    void restore(std::vector<double> m, std::vector<double> v, std::int64_t t);

  private:
    AdamConfig cfg_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::int64_t t_ = 0;
};

double global_norm(std::span<const double> v);

/// Scales `grads` in place so its global norm is at most `max_norm`.
void clip_global_norm(std::span<double> grads, double max_norm);

}  // namespace pucycle
