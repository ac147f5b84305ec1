#include "rladnet/rladnet.h"

#include <cstring>
#include <exception>
#include <string>

#include "autoencoder/autoencoder.hpp"
#include "common/error.hpp"
#include "geometry/crop.hpp"
#include "geometry/metrics.hpp"
#include "geometry/sampling.hpp"
#include "harness/cloud_io.hpp"
#include "harness/commands.hpp"
#include "harness/config.hpp"
#include "harness/surrogate.hpp"
#include "harness/synthetic.hpp"
#include "refiner/agent.hpp"
#include "selector/pointnn.hpp"

struct rladnet_cloud {
    rladnet::PointCloud cloud;
};
struct rladnet_ae {
    rladnet::AEModel model;
};
struct rladnet_policy {
    rladnet::LoadedPolicy loaded;
};
struct rladnet_bank {
    rladnet::FeatureBank bank;
};

namespace {

thread_local std::string last_error;

template <class F>
rladnet_status guarded(F&& f) noexcept {
    last_error.clear();
    try {
        f();
        return RLADNET_OK;
    } catch (const rladnet::DegenerateGeometry& e) {
        last_error = e.what();
        return RLADNET_E_DEGENERATE_GEOMETRY;
    } catch (const rladnet::ContractViolation& e) {
        last_error = e.what();
        return RLADNET_E_CONTRACT_VIOLATION;
    } catch (const rladnet::InvalidState& e) {
        last_error = e.what();
        return RLADNET_E_INVALID_STATE;
    } catch (const rladnet::ParseError& e) {
        last_error = e.what();
        return RLADNET_E_PARSE;
    } catch (const rladnet::IoError& e) {
        last_error = e.what();
        return RLADNET_E_IO;
    } catch (const rladnet::InvalidArgument& e) {
        last_error = e.what();
        return RLADNET_E_INVALID_ARGUMENT;
    } catch (const std::filesystem::filesystem_error& e) {
        last_error = e.what();
        return RLADNET_E_IO;
    } catch (const std::exception& e) {
        last_error = e.what();
        return RLADNET_E_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return RLADNET_E_INTERNAL;
    }
}

template <class T>
void require(const T* p, const char* name) {
    if (!p) throw rladnet::InvalidArgument(std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

rladnet::ExperimentConfig options_config(const rladnet_run_options* opt) {
    require(opt, "options");
    auto cfg = opt->config_path ? rladnet::load_config(opt->config_path) : rladnet::desk_profile();
    if (opt->has_seed) {
        cfg.seed = opt->seed;
        cfg.ae_train.seed = opt->seed;
        cfg.rl.seed = opt->seed;
    }
    return cfg;
}

std::filesystem::path out_dir(const rladnet_run_options* opt) {
    return opt->out_dir ? std::filesystem::path(opt->out_dir) : std::filesystem::path("out");
}

template <class F>
rladnet_status command(char** summary, F&& f) noexcept {
    return guarded([&] {
        require(summary, "summary");
        *summary = dup_string(f());
    });
}

}  // namespace

extern "C" {

const char* rladnet_version(void) { return "0.1.0"; }

const char* rladnet_status_string(rladnet_status s) {
    switch (s) {
        case RLADNET_OK: return "ok";
        case RLADNET_E_INVALID_ARGUMENT: return "invalid argument";
        case RLADNET_E_DEGENERATE_GEOMETRY: return "degenerate geometry";
        case RLADNET_E_INVALID_STATE: return "invalid state";
        case RLADNET_E_CONTRACT_VIOLATION: return "contract violation";
        case RLADNET_E_PARSE: return "parse error";
        case RLADNET_E_IO: return "i/o error";
        case RLADNET_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rladnet_last_error(void) { return last_error.c_str(); }

void rladnet_string_free(char* s) { delete[] s; }

rladnet_status rladnet_cloud_create(const double* xyz, size_t n, rladnet_cloud** out) {
    return guarded([&] {
        require(xyz, "xyz");
        require(out, "out");
        std::vector<double> flat(xyz, xyz + 3 * n);
        *out = new rladnet_cloud{rladnet::PointCloud::from_flat(flat)};
    });
}

rladnet_status rladnet_cloud_load(const char* path, rladnet_cloud** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new rladnet_cloud{rladnet::load_cloud(path)};
    });
}

rladnet_status rladnet_cloud_save(const rladnet_cloud* c, const char* path, const char* format) {
    return guarded([&] {
        require(c, "cloud");
        require(path, "path");
        if (format) rladnet::save_cloud(path, c->cloud, rladnet::parse_cloud_format(format));
        else rladnet::save_cloud(path, c->cloud);
    });
}

size_t rladnet_cloud_size(const rladnet_cloud* c) { return c ? c->cloud.size() : 0; }

rladnet_status rladnet_cloud_points(const rladnet_cloud* c, double* xyz, size_t capacity) {
    return guarded([&] {
        require(c, "cloud");
        require(xyz, "xyz");
        if (capacity < c->cloud.size()) throw rladnet::InvalidArgument("buffer holds fewer points than the cloud");
        const auto flat = c->cloud.flatten();
        std::memcpy(xyz, flat.data(), flat.size() * sizeof(double));
    });
}

void rladnet_cloud_destroy(rladnet_cloud* c) { delete c; }

rladnet_status rladnet_chamfer_l2(const rladnet_cloud* a, const rladnet_cloud* b, double* out) {
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out, "out");
        *out = rladnet::chamfer_l2(a->cloud, b->cloud);
    });
}

rladnet_status rladnet_fscore(const rladnet_cloud* pred, const rladnet_cloud* gt, double tau_fraction,
                              rladnet_metric_report* out) {
    return guarded([&] {
        require(pred, "pred");
        require(gt, "gt");
        require(out, "out");
        const auto r = rladnet::fscore(pred->cloud, gt->cloud, tau_fraction);
        *out = {r.cd_l2, r.fscore, r.precision, r.recall, r.tau};
    });
}

rladnet_status rladnet_crop(const rladnet_cloud* src, rladnet_crop_mode mode, double ratio, uint64_t seed,
                            rladnet_cloud** partial, size_t* removed_count) {
    return guarded([&] {
        require(src, "src");
        require(partial, "partial");
        if (mode != RLADNET_CROP_SPHERICAL && mode != RLADNET_CROP_SEED_PROXIMITY)
            throw rladnet::InvalidArgument("unknown crop mode");
        auto r = rladnet::crop(src->cloud,
                               mode == RLADNET_CROP_SPHERICAL ? rladnet::CropMode::Spherical
                                                              : rladnet::CropMode::SeedProximity,
                               ratio, seed);
        if (removed_count) *removed_count = r.removed_indices.size();
        *partial = new rladnet_cloud{std::move(r.partial)};
    });
}

rladnet_status rladnet_normalize(const rladnet_cloud* src, rladnet_cloud** out, double centroid[3], double* scale) {
    return guarded([&] {
        require(src, "src");
        require(out, "out");
        auto n = rladnet::normalize_unit_sphere(src->cloud);
        if (centroid)
            for (int d = 0; d < 3; ++d) centroid[d] = n.centroid[d];
        if (scale) *scale = n.scale;
        *out = new rladnet_cloud{std::move(n.cloud)};
    });
}

rladnet_status rladnet_synthesize(const char* family, size_t points, uint64_t seed, rladnet_cloud** out) {
    return guarded([&] {
        require(family, "family");
        require(out, "out");
        const auto spec = rladnet::random_shape_spec(rladnet::parse_family(family), points, seed);
        *out = new rladnet_cloud{rladnet::generate_synthetic(spec)};
    });
}

rladnet_status rladnet_surrogate_complete(const rladnet_cloud* partial, size_t target, uint64_t seed,
                                          rladnet_cloud** out) {
    return guarded([&] {
        require(partial, "partial");
        require(out, "out");
        *out = new rladnet_cloud{rladnet::surrogate_complete(partial->cloud, target, seed)};
    });
}

rladnet_status rladnet_ae_load(const char* dir, rladnet_ae** out) {
    return guarded([&] {
        require(dir, "dir");
        require(out, "out");
        *out = new rladnet_ae{rladnet::load_ae(dir)};
    });
}

void rladnet_ae_destroy(rladnet_ae* ae) { delete ae; }

rladnet_status rladnet_ae_encode(const rladnet_ae* ae, const rladnet_cloud* cloud, float z[RLADNET_GFV_DIM]) {
    return guarded([&] {
        require(ae, "ae");
        require(cloud, "cloud");
        require(z, "z");
        const auto g = rladnet::encode(ae->model, cloud->cloud);
        std::memcpy(z, g.data(), sizeof(float) * RLADNET_GFV_DIM);
    });
}

rladnet_status rladnet_ae_decode(const rladnet_ae* ae, const float z[RLADNET_GFV_DIM], rladnet_cloud** out) {
    return guarded([&] {
        require(ae, "ae");
        require(z, "z");
        require(out, "out");
        const auto g = rladnet::Gfv::from_span(std::span<const float>(z, RLADNET_GFV_DIM));
        *out = new rladnet_cloud{rladnet::decode(ae->model, g)};
    });
}

rladnet_status rladnet_ae_decoder_checksum(const rladnet_ae* ae, uint64_t* out) {
    return guarded([&] {
        require(ae, "ae");
        require(out, "out");
        *out = rladnet::decoder_checksum(ae->model);
    });
}

rladnet_status rladnet_policy_load(const char* path, rladnet_policy** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new rladnet_policy{rladnet::load_policy(path)};
    });
}

void rladnet_policy_destroy(rladnet_policy* p) { delete p; }

rladnet_status rladnet_policy_refine(const rladnet_policy* p, const float z[RLADNET_GFV_DIM],
                                     float z_out[RLADNET_GFV_DIM]) {
    return guarded([&] {
        require(p, "policy");
        require(z, "z");
        require(z_out, "z_out");
        const auto g = rladnet::Gfv::from_span(std::span<const float>(z, RLADNET_GFV_DIM));
        const auto r = rladnet::refine(p->loaded.policy, g, p->loaded.env_cfg);
        std::memcpy(z_out, r.data(), sizeof(float) * RLADNET_GFV_DIM);
    });
}

rladnet_status rladnet_bank_load(const char* path, rladnet_bank** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new rladnet_bank{rladnet::read_feature_bank(path)};
    });
}

void rladnet_bank_destroy(rladnet_bank* b) { delete b; }

rladnet_status rladnet_quality_score(const rladnet_bank* bank, const rladnet_cloud* cloud, const char* config_path,
                                     double* out) {
    return guarded([&] {
        require(bank, "bank");
        require(cloud, "cloud");
        require(out, "out");
        const auto cfg = config_path ? rladnet::load_config(config_path) : rladnet::desk_profile();
        *out = rladnet::quality_score(cloud->cloud, bank->bank, cfg.selector);
    });
}

rladnet_status rladnet_param_counts(const char* config_path, size_t* actor, size_t* critic) {
    return guarded([&] {
        const auto cfg = config_path ? rladnet::load_config(config_path) : rladnet::desk_profile();
        if (actor) *actor = rladnet::actor_parameter_count(cfg.rl);
        if (critic) *critic = rladnet::critic_parameter_count(cfg.rl);
    });
}

rladnet_status rladnet_cmd_synth(const rladnet_run_options* opt, const char* family, size_t count, size_t points,
                                 char** summary) {
    return command(summary, [&] {
        const auto cfg = options_config(opt);
        require(family, "family");
        return rladnet::commands::synth(rladnet::parse_family(family), count, points, cfg.seed, out_dir(opt));
    });
}

rladnet_status rladnet_cmd_crop(const rladnet_run_options* opt, const char* input, const char* mode, double ratio,
                                size_t complete_to, char** summary) {
    return command(summary, [&] {
        const auto cfg = options_config(opt);
        require(input, "input");
        const auto m = mode ? rladnet::parse_crop_mode(mode) : cfg.crop_mode;
        const double r = ratio > 0.0 ? ratio : cfg.crop_ratio;
        return rladnet::commands::crop(input, m, r, cfg.seed, complete_to, out_dir(opt));
    });
}

rladnet_status rladnet_cmd_ae_train(const rladnet_run_options* opt, const char* manifest, char** summary) {
    return command(summary, [&] {
        const auto cfg = options_config(opt);
        require(manifest, "manifest");
        return rladnet::commands::ae_train(manifest, cfg, out_dir(opt));
    });
}

rladnet_status rladnet_cmd_gfv_export(const rladnet_run_options* opt, const char* ae_dir, const char* manifest,
                                      char** summary) {
    return command(summary, [&] {
        options_config(opt);
        require(ae_dir, "ae_dir");
        require(manifest, "manifest");
        return rladnet::commands::gfv_export(ae_dir, manifest, out_dir(opt) / "gfv.txt");
    });
}

rladnet_status rladnet_cmd_rl_train(const rladnet_run_options* opt, const char* agent, const char* ae_dir,
                                    const char* gfv_file, long iterations, int dry_run, char** summary) {
    return command(summary, [&] {
        auto cfg = options_config(opt);
        if (agent) cfg.rl.agent = rladnet::parse_agent(agent);
        if (iterations >= 0) cfg.rl.iterations = iterations;
        if (cfg.rl.agent == rladnet::AgentKind::DDPG) cfg.rl = cfg.rl.as_ddpg();
        cfg.rl.validate();
        if (dry_run) return std::string("rl-train: agent=") + rladnet::agent_name(cfg.rl.agent) + " " +
                            rladnet::commands::param_report(cfg.rl);
        require(ae_dir, "ae_dir");
        require(gfv_file, "gfv_file");
        return rladnet::commands::rl_train(ae_dir, gfv_file, cfg, out_dir(opt));
    });
}

rladnet_status rladnet_cmd_bank_build(const rladnet_run_options* opt, const char* manifest, const char* category,
                                      char** summary) {
    return command(summary, [&] {
        const auto cfg = options_config(opt);
        require(manifest, "manifest");
        std::optional<std::string> cat;
        if (category) cat = category;
        return rladnet::commands::bank_build(manifest, cat, cfg, out_dir(opt) / "bank.txt");
    });
}

rladnet_status rladnet_cmd_refine(const rladnet_run_options* opt, const char* ae_dir, const char* policy,
                                  const char* input, const char* bank, const char* gt, char** summary) {
    return command(summary, [&] {
        const auto cfg = options_config(opt);
        require(ae_dir, "ae_dir");
        require(policy, "policy");
        require(input, "input");
        std::optional<std::filesystem::path> b, g;
        if (bank) b = bank;
        if (gt) g = gt;
        return rladnet::commands::refine(ae_dir, policy, input, b, g, cfg, out_dir(opt));
    });
}

rladnet_status rladnet_cmd_evaluate(const rladnet_run_options* opt, const char* pred, const char* gt,
                                    double tau_fraction, char** summary) {
    return command(summary, [&] {
        const auto cfg = options_config(opt);
        require(pred, "pred");
        require(gt, "gt");
        return rladnet::commands::evaluate(pred, gt, tau_fraction > 0.0 ? tau_fraction : cfg.fscore_tau,
                                           out_dir(opt));
    });
}

rladnet_status rladnet_cmd_pipeline(const rladnet_run_options* opt, char** summary) {
    return command(summary, [&] {
        const auto cfg = options_config(opt);
        return rladnet::commands::pipeline(cfg, out_dir(opt), opt->verbose != 0);
    });
}

}  // extern "C"
