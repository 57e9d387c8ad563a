#pragma once

#include <cmath>
#include <vector>

#include "altro/nn/tensor.hpp"

namespace altro::nn {

struct AdamWConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;
};

// AdamW with decoupled weight decay over a fixed set of layers.
class AdamW {
public:
    AdamW(std::vector<LinearLayer*> layers, AdamWConfig cfg)
        : layers_(std::move(layers)), cfg_(cfg) {
        for (LinearLayer* l : layers_) {
            m_.emplace_back(l->param_count(), 0.0);
            v_.emplace_back(l->param_count(), 0.0);
        }
    }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
        const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
        for (size_t li = 0; li < layers_.size(); ++li) {
            LinearLayer* l = layers_[li];
            update_block(l->W.a, l->gW.a, m_[li].data(), v_[li].data(), bc1, bc2);
            update_block(l->b.a, l->gb.a, m_[li].data() + l->W.size(),
                         v_[li].data() + l->W.size(), bc1, bc2);
        }
    }

private:
    void update_block(std::vector<double>& p, const std::vector<double>& g, double* m,
                      double* v, double bc1, double bc2) {
        for (size_t i = 0; i < p.size(); ++i) {
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) +
                               cfg_.weight_decay * p[i]);
        }
    }

    std::vector<LinearLayer*> layers_;
    AdamWConfig cfg_;
    std::vector<std::vector<double>> m_, v_;
    long t_ = 0;
};

}  // namespace altro::nn
