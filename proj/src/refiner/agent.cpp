#include "refiner/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>

#include <json.hpp>

#include "common/error.hpp"
#include "diff/checkpoint.hpp"

namespace rladnet {
namespace {

diff::Matrix<float> stack_states(const std::vector<Transition>& batch, bool next) {
    diff::Matrix<float> m(static_cast<Eigen::Index>(batch.size()), static_cast<Eigen::Index>(kGfvDim));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Gfv& g = next ? batch[i].next_state : batch[i].state;
        for (std::size_t d = 0; d < kGfvDim; ++d) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = g[d];
    }
    return m;
}

diff::Matrix<float> stack_actions(const std::vector<Transition>& batch) {
    diff::Matrix<float> m(static_cast<Eigen::Index>(batch.size()), static_cast<Eigen::Index>(kGfvDim));
    for (std::size_t i = 0; i < batch.size(); ++i)
        for (std::size_t d = 0; d < kGfvDim; ++d)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = batch[i].action[d];
    return m;
}

diff::AdamConfig adam_with_lr(double lr) {
    diff::AdamConfig c;
    c.learning_rate = lr;
    return c;
}

nlohmann::json config_json(const TD3Config& c, const RefineEnvConfig& e) {
    return {{"agent", agent_name(c.agent)},
            {"batch_size", c.batch_size},
            {"actor_lr", c.actor_lr},
            {"critic_lr", c.critic_lr},
            {"discount", c.discount},
            {"tau", c.tau},
            {"policy_delay", c.policy_delay},
            {"exploration_sigma", c.exploration_sigma},
            {"target_noise", c.target_noise},
            {"target_noise_clip", c.target_noise_clip},
            {"iterations", c.iterations},
            {"warmup_iterations", c.warmup_iterations},
            {"buffer_capacity", c.buffer_capacity},
            {"actor_hidden", c.actor_hidden},
            {"critic_hidden", c.critic_hidden},
            {"twin_critics", c.twin_critics},
            {"target_smoothing", c.target_smoothing},
            {"seed", c.seed},
            {"alpha", e.alpha},
            {"action_bound", e.action_bound},
            {"magnitude_penalty", e.magnitude_penalty}};
}

}  // namespace

const char* agent_name(AgentKind k) noexcept { return k == AgentKind::TD3 ? "td3" : "ddpg"; }

AgentKind parse_agent(const std::string& name) {
    if (name == "td3") return AgentKind::TD3;
    if (name == "ddpg") return AgentKind::DDPG;
    throw InvalidArgument("unknown agent '" + name + "' (expected td3 or ddpg)");
}

void TD3Config::validate() const {
    if (policy_delay < 1) throw InvalidArgument("policy_delay must be >= 1");
    if (!(tau > 0.0 && tau <= 1.0)) throw InvalidArgument("tau must be in (0, 1]");
    if (batch_size < 1) throw InvalidArgument("batch_size must be positive");
    if (iterations < 0 || warmup_iterations < 0) throw InvalidArgument("iteration counts must be non-negative");
    if (buffer_capacity < batch_size) throw InvalidArgument("buffer_capacity must be >= batch_size");
    if (!(exploration_sigma >= 0.0)) throw InvalidArgument("exploration_sigma must be non-negative");
}

TD3Config TD3Config::as_ddpg() const {
    TD3Config c = *this;
    c.agent = AgentKind::DDPG;
    c.twin_critics = false;
    c.target_smoothing = false;
    c.policy_delay = 1;
    return c;
}

std::vector<float> policy_action(const Policy& policy, const Gfv& z) {
    const diff::Matrix<float> s = to_row(z);
    const auto a = actor_forward(policy.actor, s, policy.action_bound);
    return clamp_action(std::span<const float>(a.data(), static_cast<std::size_t>(a.size())), policy.action_bound);
}

Gfv refine(const Policy& policy, const Gfv& z, const RefineEnvConfig& env_cfg) {
    return apply_action(z, policy_action(policy, z), env_cfg);
}

ActorCriticAgent::ActorCriticAgent(const TD3Config& cfg, double action_bound)
    : cfg_(cfg),
      action_bound_(action_bound),
      actor_opt_(diff::NetworkParams<float>(actor_specs(kGfvDim, kGfvDim, cfg.actor_hidden)), adam_with_lr(cfg.actor_lr)),
      critic1_opt_(diff::NetworkParams<float>(critic_specs(kGfvDim, kGfvDim, cfg.critic_hidden)),
                   adam_with_lr(cfg.critic_lr)),
      critic2_opt_(diff::NetworkParams<float>(critic_specs(kGfvDim, kGfvDim, cfg.critic_hidden)),
                   adam_with_lr(cfg.critic_lr)),
      smoothing_rng_(make_stream(cfg.seed, "agent/target-smoothing")) {
    cfg_.validate();
    if (!(action_bound > 0.0)) throw InvalidArgument("action bound must be positive");
    const auto as = actor_specs(kGfvDim, kGfvDim, cfg.actor_hidden);
    const auto cs = critic_specs(kGfvDim, kGfvDim, cfg.critic_hidden);
    Rng ra = make_stream(cfg.seed, "agent/actor-init");
    Rng r1 = make_stream(cfg.seed, "agent/critic1-init");
    Rng r2 = make_stream(cfg.seed, "agent/critic2-init");
    actor_ = diff::NetworkParams<float>::initialized(as, ra);
    critic1_ = diff::NetworkParams<float>::initialized(cs, r1);
    critic2_ = diff::NetworkParams<float>::initialized(cs, r2);
    target_actor_ = actor_;
    target_critic1_ = critic1_;
    target_critic2_ = critic2_;
}

void ActorCriticAgent::set_actor(diff::NetworkParams<float> actor) {
    actor.check_same_shape(actor_);
    actor_ = std::move(actor);
    target_actor_ = actor_;
}

std::vector<float> ActorCriticAgent::act(const Gfv& z) const { return policy_action(policy(), z); }

std::vector<float> ActorCriticAgent::explore(const Gfv& z, Rng& rng) const {
    auto a = act(z);
    std::normal_distribution<double> noise(0.0, cfg_.exploration_sigma);
    for (float& x : a) x = static_cast<float>(static_cast<double>(x) + noise(rng));
    return clamp_action(a, action_bound_);
}

diff::Matrix<float> ActorCriticAgent::targets_for(const std::vector<Transition>& batch, Rng& rng) const {
    const auto n = static_cast<Eigen::Index>(batch.size());
    diff::Matrix<float> y(n, 1);
    bool any_live = false;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        y(static_cast<Eigen::Index>(i), 0) = static_cast<float>(batch[i].reward);
        any_live = any_live || !batch[i].done;
    }
    if (!any_live) return y;

    const auto next = stack_states(batch, true);
    diff::Matrix<float> next_actions = actor_forward(target_actor_, next, action_bound_);
    if (cfg_.target_smoothing) {
        std::normal_distribution<double> noise(0.0, cfg_.target_noise);
        const double c = cfg_.target_noise_clip;
        for (Eigen::Index i = 0; i < next_actions.size(); ++i) {
            const double eps = std::clamp(noise(rng), -c, c);
            next_actions.data()[i] = static_cast<float>(
                std::clamp(static_cast<double>(next_actions.data()[i]) + eps, -action_bound_, action_bound_));
        }
    }
    const auto in = concat_columns(next, next_actions);
    diff::Matrix<float> q = diff::mlp_forward(target_critic1_, in);
    if (cfg_.twin_critics) q = q.cwiseMin(diff::mlp_forward(target_critic2_, in));
    for (std::size_t i = 0; i < batch.size(); ++i)
        if (!batch[i].done)
            y(static_cast<Eigen::Index>(i), 0) += static_cast<float>(cfg_.discount) * q(static_cast<Eigen::Index>(i), 0);
    return y;
}

double ActorCriticAgent::critic1_td_error(const std::vector<Transition>& batch) const {
    Rng rng = smoothing_rng_;
    const auto y = targets_for(batch, rng);
    const auto q = diff::mlp_forward(critic1_, concat_columns(stack_states(batch, false), stack_actions(batch)));
    return static_cast<double>((q - y).squaredNorm()) / static_cast<double>(batch.size());
}

UpdateStats ActorCriticAgent::update(const ReplayBuffer& buffer, Rng& sample_rng) {
    return update_on(buffer.sample(cfg_.batch_size, sample_rng));
}

UpdateStats ActorCriticAgent::update_on(const std::vector<Transition>& batch) {
    if (batch.empty()) throw InvalidArgument("update on an empty batch");
    UpdateStats stats;
    const auto y = targets_for(batch, smoothing_rng_);
    const auto s = stack_states(batch, false);
    const auto a = stack_actions(batch);

    auto g1 = critic1_.zeros_like();
    stats.critic1_loss = critic_loss_grad(critic1_, s, a, y, g1);
    critic1_opt_.step(critic1_, g1);
    if (cfg_.twin_critics) {
        auto g2 = critic2_.zeros_like();
        stats.critic2_loss = critic_loss_grad(critic2_, s, a, y, g2);
        critic2_opt_.step(critic2_, g2);
    }
    ++critic_updates_;

    if (critic_updates_ % cfg_.policy_delay == 0) {
        auto ga = actor_.zeros_like();
        stats.actor_loss = actor_loss_grad(actor_, critic1_, s, action_bound_, ga);
        actor_opt_.step(actor_, ga);
        ++actor_updates_;
        diff::soft_update(target_actor_, actor_, cfg_.tau);
        diff::soft_update(target_critic1_, critic1_, cfg_.tau);
        if (cfg_.twin_critics) diff::soft_update(target_critic2_, critic2_, cfg_.tau);
    }
    return stats;
}

TrainResult train_agent(RefineEnvironment& env, const TD3Config& cfg) {
    cfg.validate();
    if (env.size() == 0) throw InvalidArgument("training requires a non-empty dataset");
    const double bound = env.config().action_bound;
    ActorCriticAgent agent(cfg, bound);
    ReplayBuffer buffer(cfg.buffer_capacity);
    Rng state_rng = make_stream(cfg.seed, "train/state");
    Rng explore_rng = make_stream(cfg.seed, "train/explore");
    Rng sample_rng = make_stream(cfg.seed, "train/sample");
    std::uniform_int_distribution<std::size_t> pick(0, env.size() - 1);
    std::uniform_real_distribution<double> uniform_action(-bound, bound);

    TrainResult result;
    result.curves.reserve(static_cast<std::size_t>(cfg.iterations));
    for (long it = 0; it < cfg.iterations; ++it) {
        const std::size_t idx = pick(state_rng);
        const Gfv& z = env.state(idx);
        std::vector<float> action;
        if (it < cfg.warmup_iterations) {
            action.resize(kGfvDim);
            for (float& x : action) x = static_cast<float>(uniform_action(explore_rng));
        } else {
            action = agent.explore(z, explore_rng);
        }
        const StepOutcome out = env.step(idx, action);

        Transition t;
        t.state = z;
        std::copy(action.begin(), action.end(), t.action.begin());
        t.reward = out.reward;
        t.next_state = out.next_state;
        t.done = true;
        buffer.push(t);

        result.curves.push_back({it, out.reward, out.cd_refined, out.cd_base, std::sqrt(squared_norm(action)),
                                 out.cd_base - out.cd_refined});

        if (it >= cfg.warmup_iterations && buffer.size() >= cfg.batch_size) {
            const auto stats = agent.update(buffer, sample_rng);
            result.critic_loss.push_back(stats.critic1_loss);
        }
        if (cfg.log_every > 0 && (it + 1) % cfg.log_every == 0)
            std::clog << agent_name(cfg.agent) << " iter " << (it + 1) << " reward " << out.reward << '\n';
    }
    result.policy = agent.policy();
    result.actor_updates = agent.actor_updates();
    result.critic_updates = agent.critic_updates();
    return result;
}

TrainResult td3_train(RefineEnvironment& env, TD3Config cfg) {
    cfg.agent = AgentKind::TD3;
    return train_agent(env, cfg);
}

TrainResult ddpg_train(RefineEnvironment& env, const TD3Config& cfg) { return train_agent(env, cfg.as_ddpg()); }

std::size_t actor_parameter_count(const TD3Config& cfg) {
    std::size_t n = 0;
    for (const auto& s : actor_specs(kGfvDim, kGfvDim, cfg.actor_hidden)) n += s.in * s.out + s.out;
    return n;
}

std::size_t critic_parameter_count(const TD3Config& cfg) {
    std::size_t n = 0;
    for (const auto& s : critic_specs(kGfvDim, kGfvDim, cfg.critic_hidden)) n += s.in * s.out + s.out;
    return n;
}

void write_curves_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "iter,reward,cd_refined,cd_base,action_norm,improvement\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : rows)
        out << r.iter << ',' << r.reward << ',' << r.cd_refined << ',' << r.cd_base << ',' << r.action_norm << ','
            << r.improvement << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void save_policy(const std::filesystem::path& path, const Policy& policy, const TD3Config& cfg,
                 const RefineEnvConfig& env_cfg) {
    diff::save_checkpoint(path, policy.actor);
    std::ofstream side(path.string() + ".json", std::ios::trunc);
    if (!side) throw IoError("cannot write policy sidecar for " + path.string());
    auto j = config_json(cfg, env_cfg);
    j["action_bound"] = policy.action_bound;
    side << j.dump() << '\n';
}

LoadedPolicy load_policy(const std::filesystem::path& path) {
    const std::string side_path = path.string() + ".json";
    std::ifstream side(side_path);
    if (!side) throw IoError("missing policy sidecar " + side_path);
    nlohmann::json j;
    try {
        side >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(side_path, 1, e.what());
    }
    LoadedPolicy lp;
    TD3Config& c = lp.cfg;
    c.agent = parse_agent(j.at("agent").get<std::string>());
    c.batch_size = j.at("batch_size");
    c.actor_lr = j.at("actor_lr");
    c.critic_lr = j.at("critic_lr");
    c.discount = j.at("discount");
    c.tau = j.at("tau");
    c.policy_delay = j.at("policy_delay");
    c.exploration_sigma = j.at("exploration_sigma");
    c.target_noise = j.at("target_noise");
    c.target_noise_clip = j.at("target_noise_clip");
    c.iterations = j.at("iterations");
    c.warmup_iterations = j.at("warmup_iterations");
    c.buffer_capacity = j.at("buffer_capacity");
    c.actor_hidden = j.at("actor_hidden").get<std::vector<std::size_t>>();
    c.critic_hidden = j.at("critic_hidden").get<std::vector<std::size_t>>();
    c.twin_critics = j.at("twin_critics");
    c.target_smoothing = j.at("target_smoothing");
    c.seed = j.at("seed");
    lp.env_cfg.alpha = j.at("alpha");
    lp.env_cfg.action_bound = j.at("action_bound");
    lp.env_cfg.magnitude_penalty = j.at("magnitude_penalty");
    lp.policy.action_bound = lp.env_cfg.action_bound;
    const auto specs = actor_specs(kGfvDim, kGfvDim, c.actor_hidden);
    lp.policy.actor = diff::load_checkpoint(path, specs);
    return lp;
}

}  // namespace rladnet
