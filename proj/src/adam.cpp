#include "pucycle/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace pucycle {

Adam::Adam(std::size_t n, AdamConfig cfg) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw std::invalid_argument("Adam::step: length mismatch");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < m_.size(); ++i) {
        const double g = grads[i];
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g * g;
        const double m_hat = m_[i] / bc1;
        const double v_hat = v_[i] / bc2;
        params[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
}

void Adam::restore(std::vector<double> m, std::vector<double> v, std::int64_t t) {
    if (m.size() != m_.size() || v.size() != v_.size()) {
        throw std::invalid_argument("Adam::restore: length mismatch");
    }
    if (t < 0) throw std::invalid_argument("Adam::restore: negative step counter");
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

double global_norm(std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

void clip_global_norm(std::span<double> grads, double max_norm) {
    if (max_norm <= 0.0) throw std::invalid_argument("clip_global_norm: max_norm must be positive");
    const double norm = global_norm(grads);
    if (norm <= max_norm) return;
    const double s = max_norm / norm;
    for (double& g : grads) g *= s;
}

}  // namespace pucycle
