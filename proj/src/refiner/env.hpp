#pragma once

#include <span>
#include <vector>

#include "autoencoder/autoencoder.hpp"
#include "autoencoder/gfv_dataset.hpp"

namespace rladnet {

struct RefineEnvConfig {
    double alpha = 0.1;              // latent step: z' = z + alpha * action
    double action_bound = 1.0;       // per-dimension clamp
    double magnitude_penalty = 1e-3; // lambda in reward -= lambda * |action|^2
    void validate() const;
};

// Clamps every component to [-bound, bound].
std::vector<float> clamp_action(std::span<const float> action, double bound);
double squared_norm(std::span<const float> v);

// z + alpha * clamp(action).
Gfv apply_action(const Gfv& z, std::span<const float> action, const RefineEnvConfig& cfg);

struct EnvStepResult {
    PointCloud refined;
    double reward = 0.0;
    Gfv next_state;
    double cd_refined = 0.0;
    double cd_base = 0.0;
};

// One refinement step:
//   reward = CD(base, gt) - CD(decode(z + alpha a), gt) - lambda |a|^2
// with `a` clamped to the action bound. Throws ContractViolation when gt is null.
EnvStepResult env_step(const AEModel& ae, const Gfv& z, std::span<const float> action, const PointCloud* gt,
                       const PointCloud& base, const RefineEnvConfig& cfg);

struct StepOutcome {
    double reward = 0.0;
    double cd_refined = 0.0;
    double cd_base = 0.0;
    Gfv next_state;
};

// One-step episodic environment over a fixed set of stored latent states.
class RefineEnvironment {
public:
    virtual ~RefineEnvironment() = default;
    virtual std::size_t size() const = 0;
    virtual const Gfv& state(std::size_t index) const = 0;
    virtual StepOutcome step(std::size_t index, std::span<const float> action) = 0;
    virtual const RefineEnvConfig& config() const = 0;
};

struct LatentSample {
    Gfv z;
    PointCloud base;
    PointCloud gt;
};

// The Chamfer-improvement environment over stored GFVs with their baseline
// and ground-truth clouds. Holds the autoencoder by const reference.
class LatentRefineEnv final : public RefineEnvironment {
public:
    LatentRefineEnv(const AEModel& ae, std::vector<LatentSample> samples, RefineEnvConfig cfg);

    std::size_t size() const override { return samples_.size(); }
    const Gfv& state(std::size_t index) const override { return samples_.at(index).z; }
    StepOutcome step(std::size_t index, std::span<const float> action) override;
    const RefineEnvConfig& config() const override { return cfg_; }

private:
    const AEModel& ae_;
    std::vector<LatentSample> samples_;
    std::vector<double> cd_base_;
    RefineEnvConfig cfg_;
};

}  // namespace rladnet
