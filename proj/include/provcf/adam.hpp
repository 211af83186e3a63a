#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "provcf/errors.hpp"
#include "provcf/tensor.hpp"

namespace provcf {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Bias-corrected Adam over externally owned parameter tensors.
class AdamOptimizer {
public:
    AdamOptimizer(AdamConfig cfg, std::vector<Tensor*> params)
        : cfg_(cfg), params_(std::move(params)) {
        m_.reserve(params_.size());
        v_.reserve(params_.size());
        for (const Tensor* p : params_) {
            if (!p->requires_grad) throw ContractError("adam: parameter does not require grad");
            m_.emplace_back(p->size(), 0.0);
            v_.emplace_back(p->size(), 0.0);
        }
    }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t pi = 0; pi < params_.size(); ++pi) {
            Tensor& p = *params_[pi];
            if (p.grad.size() != p.size()) throw ContractError("adam: missing gradient");
            for (std::size_t k = 0; k < p.size(); ++k) {
                const double g = p.grad[k];
                m_[pi][k] = cfg_.beta1 * m_[pi][k] + (1.0 - cfg_.beta1) * g;
                v_[pi][k] = cfg_.beta2 * v_[pi][k] + (1.0 - cfg_.beta2) * g * g;
                const double mhat = m_[pi][k] / bc1;
                const double vhat = v_[pi][k] / bc2;
                p.data[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
        }
    }

    void zero_grad() {
        for (Tensor* p : params_) p->zero_grad();
    }

    std::size_t steps() const { return t_; }

private:
    AdamConfig cfg_;
    std::vector<Tensor*> params_;
    std::vector<std::vector<double>> m_, v_;
    std::size_t t_ = 0;
};

} // namespace provcf
