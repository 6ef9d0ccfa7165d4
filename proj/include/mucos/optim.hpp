#pragma once
// AdamW with decoupled weight decay: each step first shrinks the parameter
// by lr * weight_decay, then applies the bias-corrected Adam update. The
// decay therefore never flows through the moment estimates.

#include <cmath>
#include <cstddef>
#include <vector>

#include "mucos/encoder.hpp"
#include "mucos/errors.hpp"

namespace mucos {

struct AdamWConfig {
    double lr = 5e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

class AdamW {
public:
    AdamW(EncoderModel& model, const AdamWConfig& cfg) : model_(&model), cfg_(cfg) {
        for (const auto& p : model.parameters()) {
            m_.emplace_back(p.tensor->rows, p.tensor->cols);
            v_.emplace_back(p.tensor->rows, p.tensor->cols);
        }
    }

    std::size_t steps() const { return step_; }
    const AdamWConfig& config() const { return cfg_; }

    // One update from gradients laid out in parameters() order.
    void step(const GradientSet& grads) {
        auto params = model_->parameters();
        if (grads.tensors.size() != params.size()) {
            throw TrainError("optimizer step: gradient/parameter count mismatch");
        }
        ++step_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
        for (std::size_t t = 0; t < params.size(); ++t) {
            Tensor& p = *params[t].tensor;
            const Tensor& g = grads.tensors[t];
            if (g.rows != p.rows || g.cols != p.cols) {
                throw TrainError("optimizer step: gradient shape mismatch");
            }
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double gi = g.data[i];
                if (!std::isfinite(gi)) {
                    throw TrainError("optimizer step: non-finite gradient");
                }
                p.data[i] *= 1.0 - cfg_.lr * cfg_.weight_decay;
                m_[t].data[i] = cfg_.beta1 * m_[t].data[i] + (1.0 - cfg_.beta1) * gi;
                v_[t].data[i] = cfg_.beta2 * v_[t].data[i] + (1.0 - cfg_.beta2) * gi * gi;
                const double mhat = m_[t].data[i] / bc1;
                const double vhat = v_[t].data[i] / bc2;
                p.data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
        }
        ++model_->revision;
    }

private:
    EncoderModel* model_;
    AdamWConfig cfg_;
    std::size_t step_ = 0;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
};

}  // namespace mucos
