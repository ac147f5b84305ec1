#pragma once

#include <cmath>
#include <vector>

#include "diff/network.hpp"

namespace rladnet::diff {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<int> milestones;  // epochs at which the rate is multiplied by gamma
    double gamma = 0.5;
};

// base_lr * gamma^(number of milestones <= epoch).
double scheduled_learning_rate(const AdamConfig& cfg, int epoch) noexcept;

template <class Scalar>
class AdamState {
public:
    AdamState(const NetworkParams<Scalar>& params, AdamConfig cfg)
        : cfg_(std::move(cfg)), m_(params.zeros_like()), v_(params.zeros_like()) {}

    // One bias-corrected Adam update at the scheduled rate for `epoch`.
    void step(NetworkParams<Scalar>& params, const NetworkParams<Scalar>& grads, int epoch = 0) {
        params.check_same_shape(grads);
        params.check_same_shape(m_);
        ++step_;
        const double lr = scheduled_learning_rate(cfg_, epoch);
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
        const Scalar b1 = static_cast<Scalar>(cfg_.beta1), b2 = static_cast<Scalar>(cfg_.beta2);
        const Scalar step_size = static_cast<Scalar>(lr / bc1);
        const Scalar inv_sqrt_bc2 = static_cast<Scalar>(1.0 / std::sqrt(bc2));
        const Scalar eps = static_cast<Scalar>(cfg_.epsilon);

        auto& pl = params.mutable_layers();
        auto& ml = m_.mutable_layers();
        auto& vl = v_.mutable_layers();
        const auto& gl = grads.layers();
        auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
            m = b1 * m + (Scalar(1) - b1) * g;
            v = b2 * v + (Scalar(1) - b2) * g.cwiseProduct(g);
            p.array() -= step_size * m.array() / (v.array().sqrt() * inv_sqrt_bc2 + eps);
        };
        for (std::size_t i = 0; i < pl.size(); ++i) {
            update(pl[i].weight, ml[i].weight, vl[i].weight, gl[i].weight);
            update(pl[i].bias, ml[i].bias, vl[i].bias, gl[i].bias);
        }
    }

    long step_count() const noexcept { return step_; }
    const AdamConfig& config() const noexcept { return cfg_; }
    const NetworkParams<Scalar>& first_moment() const noexcept { return m_; }
    const NetworkParams<Scalar>& second_moment() const noexcept { return v_; }

private:
    AdamConfig cfg_;
    NetworkParams<Scalar> m_;
    NetworkParams<Scalar> v_;
    long step_ = 0;
};

}  // namespace rladnet::diff
