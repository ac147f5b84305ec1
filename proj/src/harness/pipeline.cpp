#include "harness/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "geometry/metrics.hpp"
#include "geometry/sampling.hpp"
#include "harness/cloud_io.hpp"
#include "harness/manifest.hpp"
#include "harness/surrogate.hpp"
#include "harness/synthetic.hpp"
#include "refiner/agent.hpp"
#include "refiner/env.hpp"

namespace rladnet {
namespace {

namespace fs = std::filesystem;

struct Sample {
    std::string id;
    PointCloud gt;  // normalised
    Point3 centroid;
    double scale = 1.0;
    PointCloud baseline;
};

std::string sample_id(const std::string& category, std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zu", i);
    return category + "-" + buf;
}

[[noreturn]] void stage_error(const std::string& stage, const std::string& category, const std::string& what) {
    throw IoError("pipeline stage '" + stage + "' (category " + category + "): " + what);
}

std::vector<Sample> ingest(const CategorySource& src, const ExperimentConfig& cfg) {
    std::vector<Sample> out;
    auto add = [&](std::string id, const PointCloud& raw) {
        auto n = normalize_unit_sphere(raw);
        out.push_back({std::move(id), std::move(n.cloud), n.centroid, n.scale, n.cloud});
    };
    if (src.manifest) {
        for (const auto& e : read_manifest(*src.manifest)) {
            if (!fs::exists(e.path)) stage_error("ingest", src.name, "missing shape file " + e.path.string());
            add(e.id, load_cloud(e.path));
        }
    } else {
        for (std::size_t i = 0; i < cfg.shapes_per_category; ++i) {
            const auto id = sample_id(src.name, i);
            add(id, generate_synthetic(random_shape_spec(*src.family, cfg.points, mix64(cfg.seed ^ fnv1a64(id)))));
        }
    }
    if (out.empty()) stage_error("ingest", src.name, "no shapes");
    return out;
}

PointCloud load_completion(const fs::path& dir, const Sample& s, const std::string& category) {
    for (const char* ext : {".pcf", ".xyz"}) {
        const auto p = dir / (s.id + ext);
        if (fs::exists(p)) return apply_normalization(load_cloud(p), s.centroid, s.scale);
    }
    stage_error("baseline", category, "no external completion for " + s.id + " in " + dir.string());
}

void complete(std::vector<Sample>& samples, const std::string& category, const ExperimentConfig& cfg) {
    for (auto& s : samples) {
        if (cfg.completions_dir) {
            s.baseline = load_completion(*cfg.completions_dir, s, category);
            continue;
        }
        const std::uint64_t sid = mix64(cfg.seed ^ fnv1a64(s.id));
        const auto cropped = crop(s.gt, cfg.crop_mode, cfg.crop_ratio, sid ^ fnv1a64("crop"));
        s.baseline = surrogate_complete(cropped.partial, s.gt.size(), sid ^ fnv1a64("surrogate"), cfg.surrogate_jitter);
    }
}

MetricsRow mean_row(const std::string& category, const char* method, const std::vector<SampleOutcome>& rows,
                    double SampleOutcome::*cd, double SampleOutcome::*fs, std::size_t refined_count) {
    MetricsRow r{category, method, 0.0, 0.0, rows.size(), refined_count};
    for (const auto& s : rows) {
        r.mean_cd_l2 += s.*cd;
        r.mean_fscore += s.*fs;
    }
    r.mean_cd_l2 /= static_cast<double>(rows.size());
    r.mean_fscore /= static_cast<double>(rows.size());
    return r;
}

void say(std::ostream* log, const std::string& msg) {
    if (log) *log << msg << std::endl;
}

}  // namespace

bool is_test_sample(const std::string& id, double test_fraction) {
    return static_cast<double>(fnv1a64(id) % 10000) < test_fraction * 10000.0;
}

PipelineResult run_pipeline(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream* log) {
    cfg.validate();
    fs::create_directories(out_dir);
    PipelineResult result;

    for (const auto& src : cfg.categories) {
        const fs::path cat_dir = out_dir / src.name;
        fs::create_directories(cat_dir);
        const auto art_it = cfg.artifacts.find(src.name);
        const CategoryArtifacts art = art_it == cfg.artifacts.end() ? CategoryArtifacts{} : art_it->second;

        auto samples = ingest(src, cfg);
        complete(samples, src.name, cfg);
        std::vector<const Sample*> train, test;
        for (const auto& s : samples) (is_test_sample(s.id, cfg.test_fraction) ? test : train).push_back(&s);
        if (test.empty()) stage_error("split", src.name, "empty test split");
        say(log, src.name + ": " + std::to_string(train.size()) + " train, " + std::to_string(test.size()) + " test");

        AEModel ae;
        if (art.ae_dir) {
            if (!fs::exists(*art.ae_dir)) stage_error("ae", src.name, "missing autoencoder " + art.ae_dir->string());
            ae = load_ae(*art.ae_dir);
        } else {
            if (train.empty()) stage_error("ae", src.name, "no training shapes");
            std::vector<PointCloud> shapes;
            for (const auto* s : train) shapes.push_back(s->gt);
            AETrainConfig tc = cfg.ae_train;
            tc.seed = mix64(cfg.seed ^ fnv1a64(src.name));
            auto tr = train_ae(shapes, cfg.ae_arch, tc);
            ae = std::move(tr.model);
            say(log, src.name + ": ae loss " + std::to_string(tr.epoch_loss.front()) + " -> " +
                         std::to_string(tr.epoch_loss.back()));
        }
        save_ae(cat_dir / "ae", ae);

        Policy policy;
        RefineEnvConfig env_cfg = cfg.env;
        if (art.policy) {
            if (!fs::exists(*art.policy)) stage_error("policy", src.name, "missing policy " + art.policy->string());
            auto lp = load_policy(*art.policy);
            policy = std::move(lp.policy);
            env_cfg = lp.env_cfg;
        } else {
            if (train.empty()) stage_error("policy", src.name, "no training samples");
            std::vector<LatentSample> ls;
            for (const auto* s : train) ls.push_back({encode(ae, s->baseline), s->baseline, s->gt});
            LatentRefineEnv env(ae, std::move(ls), env_cfg);
            TD3Config rc = cfg.rl;
            rc.seed = mix64(cfg.seed ^ fnv1a64(src.name + "/rl"));
            auto tr = rc.agent == AgentKind::DDPG ? ddpg_train(env, rc) : td3_train(env, rc);
            policy = std::move(tr.policy);
            write_curves_csv(cat_dir / "curves.csv", tr.curves);
        }
        save_policy(cat_dir / "policy.rladnp", policy, cfg.rl, env_cfg);

        FeatureBank bank;
        if (art.bank) {
            if (!fs::exists(*art.bank)) stage_error("bank", src.name, "missing feature bank " + art.bank->string());
            bank = read_feature_bank(*art.bank);
        } else {
            if (train.empty()) stage_error("bank", src.name, "no reference shapes");
            std::vector<PointCloud> refs;
            for (const auto* s : train) refs.push_back(s->gt);
            bank = build_feature_bank(refs, src.name, cfg.selector);
        }
        write_feature_bank(cat_dir / "bank.txt", bank);

        std::vector<SampleOutcome> rows;
        std::size_t refined_count = 0;
        for (const auto* s : test) {
            SampleOutcome o;
            o.category = src.name;
            o.z_before = encode(ae, s->baseline);
            o.z_after = refine(policy, o.z_before, env_cfg);
            const PointCloud refined = decode(ae, o.z_after);
            o.selection = select(s->id, s->baseline, refined, bank, cfg.dual_criterion ? &s->gt : nullptr, cfg.selector);
            const auto mb = fscore(s->baseline, s->gt, cfg.fscore_tau);
            const auto mr = fscore(refined, s->gt, cfg.fscore_tau);
            const bool took_refined = o.selection.chosen == Choice::Refined;
            o.cd_base = mb.cd_l2;
            o.cd_ref = mr.cd_l2;
            o.fscore_base = mb.fscore;
            o.fscore_ref = mr.fscore;
            o.cd_selected = took_refined ? mr.cd_l2 : mb.cd_l2;
            o.fscore_selected = took_refined ? mr.fscore : mb.fscore;
            refined_count += took_refined ? 1 : 0;
            rows.push_back(std::move(o));
        }
        result.metrics.push_back(mean_row(src.name, "baseline", rows, &SampleOutcome::cd_base, &SampleOutcome::fscore_base, refined_count));
        result.metrics.push_back(mean_row(src.name, "refined", rows, &SampleOutcome::cd_ref, &SampleOutcome::fscore_ref, refined_count));
        result.metrics.push_back(mean_row(src.name, "selected", rows, &SampleOutcome::cd_selected, &SampleOutcome::fscore_selected, refined_count));
        say(log, src.name + ": baseline cd " + std::to_string(result.metrics[result.metrics.size() - 3].mean_cd_l2) +
                     ", selected cd " + std::to_string(result.metrics.back().mean_cd_l2) + ", refined chosen " +
                     std::to_string(refined_count) + "/" + std::to_string(rows.size()));
        for (auto& r : rows) result.samples.push_back(std::move(r));
    }

    write_metrics_csv(out_dir / "metrics.csv", result.metrics);
    write_selections_csv(out_dir / "selections.csv", result.samples);
    write_trajectories(out_dir / "trajectories.txt", result.samples);
    return result;
}

void write_metrics_csv(const fs::path& path, const std::vector<MetricsRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(10);
    out << "category,method,mean_cd_l2,mean_fscore,n,selected_refined\n";
    for (const auto& r : rows)
        out << r.category << ',' << r.method << ',' << r.mean_cd_l2 << ',' << r.mean_fscore << ',' << r.n << ','
            << r.selected_refined << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

void write_selections_csv(const fs::path& path, const std::vector<SampleOutcome>& samples) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(10);
    out << "category,id,chosen,criterion,q_base,q_ref,cd_base,cd_ref,cd_selected\n";
    for (const auto& s : samples)
        out << s.category << ',' << s.selection.id << ',' << choice_name(s.selection.chosen) << ','
            << criterion_name(s.selection.criterion) << ',' << s.selection.q_base << ',' << s.selection.q_ref << ','
            << s.cd_base << ',' << s.cd_ref << ',' << s.cd_selected << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

void write_trajectories(const fs::path& path, const std::vector<SampleOutcome>& samples) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(9);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < kGfvDim; ++i) out << (i ? " " : "") << s.z_before[i];
        for (std::size_t i = 0; i < kGfvDim; ++i) out << ' ' << s.z_after[i];
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace rladnet
