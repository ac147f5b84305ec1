#include "refiner/env.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "geometry/metrics.hpp"

namespace rladnet {

void RefineEnvConfig::validate() const {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (!(action_bound > 0.0)) throw InvalidArgument("action_bound must be positive");
    if (!(magnitude_penalty >= 0.0)) throw InvalidArgument("magnitude_penalty must be non-negative");
}

std::vector<float> clamp_action(std::span<const float> action, double bound) {
    const float b = static_cast<float>(bound);
    std::vector<float> out(action.begin(), action.end());
    for (float& a : out) a = std::clamp(a, -b, b);
    return out;
}

double squared_norm(std::span<const float> v) {
    double s = 0.0;
    for (float x : v) s += static_cast<double>(x) * static_cast<double>(x);
    return s;
}

Gfv apply_action(const Gfv& z, std::span<const float> action, const RefineEnvConfig& cfg) {
    if (action.size() != kGfvDim) throw InvalidArgument("action must have 128 components");
    const auto a = clamp_action(action, cfg.action_bound);
    Gfv out = z;
    for (std::size_t i = 0; i < kGfvDim; ++i)
        out[i] = static_cast<float>(static_cast<double>(z[i]) + cfg.alpha * static_cast<double>(a[i]));
    return out;
}

EnvStepResult env_step(const AEModel& ae, const Gfv& z, std::span<const float> action, const PointCloud* gt,
                       const PointCloud& base, const RefineEnvConfig& cfg) {
    if (gt == nullptr) throw ContractViolation("env_step requires a ground-truth cloud");
    cfg.validate();
    const auto a = clamp_action(action, cfg.action_bound);
    Gfv next = apply_action(z, a, cfg);
    PointCloud refined = decode(ae, next);
    const double cd_base = chamfer_l2(base, *gt);
    const double cd_ref = chamfer_l2(refined, *gt);
    const double reward = cd_base - cd_ref - cfg.magnitude_penalty * squared_norm(a);
    return {std::move(refined), reward, next, cd_ref, cd_base};
}

LatentRefineEnv::LatentRefineEnv(const AEModel& ae, std::vector<LatentSample> samples, RefineEnvConfig cfg)
    : ae_(ae), samples_(std::move(samples)), cfg_(cfg) {
    cfg_.validate();
    if (samples_.empty()) throw InvalidArgument("refinement environment needs at least one sample");
    cd_base_.reserve(samples_.size());
    for (const auto& s : samples_) cd_base_.push_back(chamfer_l2(s.base, s.gt));
}

StepOutcome LatentRefineEnv::step(std::size_t index, std::span<const float> action) {
    const LatentSample& s = samples_.at(index);
    const auto a = clamp_action(action, cfg_.action_bound);
    const Gfv next = apply_action(s.z, a, cfg_);
    const double cd_ref = chamfer_l2(decode(ae_, next), s.gt);
    const double cd_base = cd_base_[index];
    return {cd_base - cd_ref - cfg_.magnitude_penalty * squared_norm(a), cd_ref, cd_base, next};
}

}  // namespace rladnet
