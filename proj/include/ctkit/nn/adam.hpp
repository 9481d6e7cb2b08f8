#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctkit/nn/tensor.hpp"

namespace ctkit::nn {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Standard Adam with bias correction; gradients are read from each tensor's
// g buffer.
class Adam {
  public:
    explicit Adam(std::vector<Tensor*> params, AdamConfig cfg = {})
        : params_(std::move(params)), cfg_(cfg) {
        m_.resize(params_.size());
        v_.resize(params_.size());
        for (size_t i = 0; i < params_.size(); ++i) {
            m_[i].assign(params_[i]->size(), 0.0);
            v_[i].assign(params_[i]->size(), 0.0);
        }
    }

    void step(double lr) {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (size_t i = 0; i < params_.size(); ++i) {
            Tensor& p = *params_[i];
            for (size_t j = 0; j < p.v.size(); ++j) {
                const double g = p.g[j];
                m_[i][j] = cfg_.beta1 * m_[i][j] + (1.0 - cfg_.beta1) * g;
                v_[i][j] = cfg_.beta2 * v_[i][j] + (1.0 - cfg_.beta2) * g * g;
                const double mhat = m_[i][j] / bc1;
                const double vhat = v_[i][j] / bc2;
                p.v[j] -= lr * mhat / (std::sqrt(vhat) + cfg_.epsilon);
            }
        }
    }

    long steps_taken() const { return t_; }

  private:
    std::vector<Tensor*> params_;
    AdamConfig cfg_;
    long t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

// base_lr halved every halving_period iterations; iteration is zero-based.
inline double scheduled_lr(double base_lr, long iteration, long halving_period) {
    if (halving_period < 1) throw std::invalid_argument("scheduled_lr: period must be >= 1");
    return base_lr * std::pow(0.5, static_cast<double>(iteration / halving_period));
}

} // namespace ctkit::nn
