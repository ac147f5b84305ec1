#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "diff/adam.hpp"
#include "refiner/env.hpp"
#include "refiner/networks.hpp"
#include "refiner/replay_buffer.hpp"

namespace rladnet {

enum class AgentKind { TD3, DDPG };

const char* agent_name(AgentKind k) noexcept;
AgentKind parse_agent(const std::string& name);

struct TD3Config {
    AgentKind agent = AgentKind::TD3;
    std::size_t batch_size = 64;
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double discount = 0.99;
    double tau = 0.005;
    int policy_delay = 2;
    double exploration_sigma = 0.1;
    double target_noise = 0.2;
    double target_noise_clip = 0.5;
    long iterations = 100000;
    long warmup_iterations = 1000;  // uniform random actions, no updates
    std::size_t buffer_capacity = 100000;
    std::vector<std::size_t> actor_hidden{350, 350};
    std::vector<std::size_t> critic_hidden{350, 350};
    bool twin_critics = true;
    bool target_smoothing = true;
    std::uint64_t seed = 0;
    long log_every = 0;  // 0: silent

    void validate() const;
    // Same settings with DDPG's knobs: one critic, no target smoothing, no delay.
    TD3Config as_ddpg() const;
};

// Deterministic refinement policy.
struct Policy {
    diff::NetworkParams<float> actor;
    double action_bound = 1.0;
};

// Bounded deterministic action for z.
std::vector<float> policy_action(const Policy& policy, const Gfv& z);
// z' = z + alpha * clamp(actor(z)).
Gfv refine(const Policy& policy, const Gfv& z, const RefineEnvConfig& env_cfg);

struct UpdateStats {
    double critic1_loss = 0.0;
    double critic2_loss = 0.0;
    std::optional<double> actor_loss;  // set on iterations with a policy update
};

// Actor, critic(s), target copies and their optimisers. TD3 and DDPG share
// this code path and differ only by configuration knobs.
class ActorCriticAgent {
public:
    ActorCriticAgent(const TD3Config& cfg, double action_bound);

    std::vector<float> act(const Gfv& z) const;
    // act(z) plus N(0, sigma) noise, clipped to the action bound.
    std::vector<float> explore(const Gfv& z, Rng& rng) const;

    // One training iteration on a sampled mini-batch.
    UpdateStats update(const ReplayBuffer& buffer, Rng& sample_rng);
    UpdateStats update_on(const std::vector<Transition>& batch);

    // Mean squared TD error of critic 1 on the given transitions (no update).
    double critic1_td_error(const std::vector<Transition>& batch) const;

    Policy policy() const { return {actor_, action_bound_}; }
    const diff::NetworkParams<float>& actor() const noexcept { return actor_; }
    const diff::NetworkParams<float>& critic1() const noexcept { return critic1_; }
    const diff::NetworkParams<float>& critic2() const noexcept { return critic2_; }
    const diff::NetworkParams<float>& target_actor() const noexcept { return target_actor_; }
    const diff::NetworkParams<float>& target_critic1() const noexcept { return target_critic1_; }
    const diff::NetworkParams<float>& target_critic2() const noexcept { return target_critic2_; }
    long critic_updates() const noexcept { return critic_updates_; }
    long actor_updates() const noexcept { return actor_updates_; }
    const TD3Config& config() const noexcept { return cfg_; }

    void set_actor(diff::NetworkParams<float> actor);

private:
    diff::Matrix<float> targets_for(const std::vector<Transition>& batch, Rng& rng) const;

    TD3Config cfg_;
    double action_bound_;
    diff::NetworkParams<float> actor_, critic1_, critic2_;
    diff::NetworkParams<float> target_actor_, target_critic1_, target_critic2_;
    diff::AdamState<float> actor_opt_, critic1_opt_, critic2_opt_;
    Rng smoothing_rng_;
    long critic_updates_ = 0;
    long actor_updates_ = 0;
};

struct CurveRow {
    long iter = 0;
    double reward = 0.0;
    double cd_refined = 0.0;
    double cd_base = 0.0;
    double action_norm = 0.0;
    double improvement = 0.0;
};

struct TrainResult {
    Policy policy;
    std::vector<CurveRow> curves;        // one row per iteration
    std::vector<double> critic_loss;     // per update iteration
    long actor_updates = 0;
    long critic_updates = 0;
};

// Off-policy training over one-step episodes of `env`.
TrainResult train_agent(RefineEnvironment& env, const TD3Config& cfg);
TrainResult td3_train(RefineEnvironment& env, TD3Config cfg);
TrainResult ddpg_train(RefineEnvironment& env, const TD3Config& cfg);

std::size_t actor_parameter_count(const TD3Config& cfg);
std::size_t critic_parameter_count(const TD3Config& cfg);  // one critic

// Curves CSV: "iter,reward,cd_refined,cd_base,action_norm,improvement".
void write_curves_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows);

// Actor checkpoint (RLADNP1) plus a one-line JSON sidecar "<path>.json" with
// the training configuration and action bound.
void save_policy(const std::filesystem::path& path, const Policy& policy, const TD3Config& cfg,
                 const RefineEnvConfig& env_cfg);
struct LoadedPolicy {
    Policy policy;
    TD3Config cfg;
    RefineEnvConfig env_cfg;
};
LoadedPolicy load_policy(const std::filesystem::path& path);

}  // namespace rladnet
