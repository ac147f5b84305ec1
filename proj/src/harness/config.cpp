#include "harness/config.hpp"

#include <fstream>

#include "common/error.hpp"

namespace rladnet {
namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

CropMode parse_crop_mode(const std::string& name) {
    if (name == "spherical") return CropMode::Spherical;
    if (name == "seed-proximity" || name == "seed") return CropMode::SeedProximity;
    throw InvalidArgument("unknown crop mode '" + name + "' (expected spherical or seed-proximity)");
}

const char* crop_mode_name(CropMode m) noexcept {
    return m == CropMode::Spherical ? "spherical" : "seed-proximity";
}

void ExperimentConfig::validate() const {
    if (categories.empty()) throw InvalidArgument("config: at least one category is required");
    if (!(crop_ratio > 0.0 && crop_ratio < 1.0)) throw InvalidArgument("config: crop ratio must lie in (0, 1)");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidArgument("config: test_fraction must lie in (0, 1)");
    if (points < 64) throw InvalidArgument("config: points must be >= 64");
    if (!(fscore_tau > 0.0)) throw InvalidArgument("config: fscore_tau must be positive");
    ae_arch.validate();
    rl.validate();
    env.validate();
    selector.validate();
}

ExperimentConfig desk_profile() {
    ExperimentConfig c;
    for (auto f : {ShapeFamily::BoxFrame, ShapeFamily::WingedCross, ShapeFamily::MultiSphere})
        c.categories.push_back({family_name(f), f, std::nullopt});
    c.shapes_per_category = 100;
    c.points = 256;
    c.ae_arch.output_points = 256;
    c.ae_train.epochs = 60;
    c.rl.iterations = 3000;
    c.rl.warmup_iterations = 500;
    c.selector.stage_sizes = {128, 32};
    return c;
}

ExperimentConfig full_profile() {
    ExperimentConfig c = desk_profile();
    c.points = 2048;
    c.ae_arch.output_points = 2048;
    c.ae_train.epochs = 400;
    c.rl.iterations = 100000;
    c.rl.warmup_iterations = 1000;
    c.selector.stage_sizes = {512, 128};
    return c;
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    return config_from_json(j, desk_profile(), base_dir);
}

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base, const std::filesystem::path& base_dir) {
    ExperimentConfig c = base;
    try {
        if (j.contains("profile")) {
            const auto p = j.at("profile").get<std::string>();
            if (p == "full") c = full_profile();
            else if (p == "desk") c = desk_profile();
            else throw InvalidArgument("config: unknown profile '" + p + "'");
        }
        if (j.contains("categories")) {
            c.categories.clear();
            for (const auto& e : j.at("categories")) {
                CategorySource s;
                if (e.is_string()) {
                    s.name = e.get<std::string>();
                    s.family = parse_family(s.name);
                } else {
                    s.name = e.at("name").get<std::string>();
                    if (e.contains("family")) s.family = parse_family(e.at("family").get<std::string>());
                    if (e.contains("manifest")) s.manifest = resolve(e.at("manifest").get<std::string>(), base_dir);
                    if (!s.family && !s.manifest)
                        throw InvalidArgument("config: category '" + s.name + "' needs a family or a manifest");
                }
                c.categories.push_back(std::move(s));
            }
        }
        read(j, "shapes_per_category", c.shapes_per_category);
        read(j, "points", c.points);
        read(j, "seed", c.seed);
        read(j, "dual_criterion", c.dual_criterion);
        read(j, "fscore_tau", c.fscore_tau);
        read(j, "test_fraction", c.test_fraction);
        if (j.contains("completions_dir")) c.completions_dir = resolve(j.at("completions_dir").get<std::string>(), base_dir);
        if (j.contains("crop")) {
            const auto& k = j.at("crop");
            if (k.contains("mode")) c.crop_mode = parse_crop_mode(k.at("mode").get<std::string>());
            read(k, "ratio", c.crop_ratio);
            read(k, "surrogate_jitter", c.surrogate_jitter);
        }
        c.ae_arch.output_points = c.points;
        if (j.contains("ae")) {
            const auto& a = j.at("ae");
            read(a, "point_widths", c.ae_arch.point_widths);
            read(a, "head_widths", c.ae_arch.head_widths);
            read(a, "decoder_hidden", c.ae_arch.decoder_hidden);
            read(a, "output_points", c.ae_arch.output_points);
            read(a, "epochs", c.ae_train.epochs);
            read(a, "batch_size", c.ae_train.batch_size);
            read(a, "lr", c.ae_train.adam.learning_rate);
            read(a, "beta1", c.ae_train.adam.beta1);
            read(a, "beta2", c.ae_train.adam.beta2);
            read(a, "milestones", c.ae_train.adam.milestones);
            read(a, "gamma", c.ae_train.adam.gamma);
        }
        if (j.contains("rl")) {
            const auto& r = j.at("rl");
            if (r.contains("agent")) c.rl.agent = parse_agent(r.at("agent").get<std::string>());
            read(r, "batch_size", c.rl.batch_size);
            read(r, "actor_lr", c.rl.actor_lr);
            read(r, "critic_lr", c.rl.critic_lr);
            read(r, "discount", c.rl.discount);
            read(r, "tau", c.rl.tau);
            read(r, "policy_delay", c.rl.policy_delay);
            read(r, "exploration_sigma", c.rl.exploration_sigma);
            read(r, "target_noise", c.rl.target_noise);
            read(r, "target_noise_clip", c.rl.target_noise_clip);
            read(r, "iterations", c.rl.iterations);
            read(r, "warmup_iterations", c.rl.warmup_iterations);
            read(r, "buffer_capacity", c.rl.buffer_capacity);
            read(r, "actor_hidden", c.rl.actor_hidden);
            read(r, "critic_hidden", c.rl.critic_hidden);
        }
        if (j.contains("env")) {
            const auto& e = j.at("env");
            read(e, "alpha", c.env.alpha);
            read(e, "action_bound", c.env.action_bound);
            read(e, "magnitude_penalty", c.env.magnitude_penalty);
        }
        if (j.contains("selector")) {
            const auto& s = j.at("selector");
            read(s, "stage_sizes", c.selector.stage_sizes);
            read(s, "k", c.selector.k);
            read(s, "bands", c.selector.bands);
            read(s, "base_frequency", c.selector.base_frequency);
        }
        if (j.contains("artifacts")) {
            for (const auto& [cat, a] : j.at("artifacts").items()) {
                CategoryArtifacts art;
                if (a.contains("ae")) art.ae_dir = resolve(a.at("ae").get<std::string>(), base_dir);
                if (a.contains("policy")) art.policy = resolve(a.at("policy").get<std::string>(), base_dir);
                if (a.contains("bank")) art.bank = resolve(a.at("bank").get<std::string>(), base_dir);
                c.artifacts[cat] = art;
            }
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    c.ae_train.seed = c.seed;
    c.rl.seed = c.seed;
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 1, e.what());
    }
    return config_from_json(j, path.parent_path());
}

json config_to_json(const ExperimentConfig& c) {
    json cats = json::array();
    for (const auto& s : c.categories) {
        json e{{"name", s.name}};
        if (s.family) e["family"] = family_name(*s.family);
        if (s.manifest) e["manifest"] = s.manifest->string();
        cats.push_back(e);
    }
    json j{{"categories", cats},
           {"shapes_per_category", c.shapes_per_category},
           {"points", c.points},
           {"seed", c.seed},
           {"dual_criterion", c.dual_criterion},
           {"fscore_tau", c.fscore_tau},
           {"test_fraction", c.test_fraction},
           {"crop", {{"mode", crop_mode_name(c.crop_mode)}, {"ratio", c.crop_ratio}, {"surrogate_jitter", c.surrogate_jitter}}},
           {"ae",
            {{"point_widths", c.ae_arch.point_widths},
             {"head_widths", c.ae_arch.head_widths},
             {"decoder_hidden", c.ae_arch.decoder_hidden},
             {"output_points", c.ae_arch.output_points},
             {"epochs", c.ae_train.epochs},
             {"batch_size", c.ae_train.batch_size},
             {"lr", c.ae_train.adam.learning_rate},
             {"beta1", c.ae_train.adam.beta1},
             {"beta2", c.ae_train.adam.beta2},
             {"milestones", c.ae_train.adam.milestones},
             {"gamma", c.ae_train.adam.gamma}}},
           {"rl",
            {{"agent", agent_name(c.rl.agent)},
             {"batch_size", c.rl.batch_size},
             {"actor_lr", c.rl.actor_lr},
             {"critic_lr", c.rl.critic_lr},
             {"discount", c.rl.discount},
             {"tau", c.rl.tau},
             {"policy_delay", c.rl.policy_delay},
             {"exploration_sigma", c.rl.exploration_sigma},
             {"target_noise", c.rl.target_noise},
             {"target_noise_clip", c.rl.target_noise_clip},
             {"iterations", c.rl.iterations},
             {"warmup_iterations", c.rl.warmup_iterations},
             {"buffer_capacity", c.rl.buffer_capacity},
             {"actor_hidden", c.rl.actor_hidden},
             {"critic_hidden", c.rl.critic_hidden}}},
           {"env", {{"alpha", c.env.alpha}, {"action_bound", c.env.action_bound}, {"magnitude_penalty", c.env.magnitude_penalty}}},
           {"selector",
            {{"stage_sizes", c.selector.stage_sizes},
             {"k", c.selector.k},
             {"bands", c.selector.bands},
             {"base_frequency", c.selector.base_frequency}}}};
    if (c.completions_dir) j["completions_dir"] = c.completions_dir->string();
    return j;
}

}  // namespace rladnet
