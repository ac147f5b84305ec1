#include "harness/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "autoencoder/gfv_dataset.hpp"
#include "common/error.hpp"
#include "geometry/crop.hpp"
#include "geometry/metrics.hpp"
#include "geometry/sampling.hpp"
#include "harness/cloud_io.hpp"
#include "harness/manifest.hpp"
#include "harness/pipeline.hpp"
#include "harness/surrogate.hpp"
#include "refiner/agent.hpp"
#include "refiner/env.hpp"

namespace rladnet::commands {
namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void require_file(const fs::path& p, const std::string& what) {
    if (!fs::exists(p)) throw IoError(what + " not found: " + p.string());
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<PointCloud> manifest_shapes(const std::vector<ManifestEntry>& entries) {
    std::vector<PointCloud> shapes;
    for (const auto& e : entries) {
        require_file(e.path, "shape");
        shapes.push_back(load_cloud(e.path));
    }
    if (shapes.empty()) throw InvalidArgument("manifest lists no shapes");
    return shapes;
}

}  // namespace

std::string synth(ShapeFamily family, std::size_t count, std::size_t points, std::uint64_t seed, const fs::path& out) {
    if (count == 0) throw InvalidArgument("synth: count must be positive");
    fs::create_directories(out);
    std::vector<ManifestEntry> entries;
    const std::string name = family_name(family);
    for (std::size_t i = 0; i < count; ++i) {
        char id[64];
        std::snprintf(id, sizeof id, "%s-%04zu", name.c_str(), i);
        const auto spec = random_shape_spec(family, points, mix64(seed ^ fnv1a64(id)));
        const auto cloud = normalize_unit_sphere(generate_synthetic(spec)).cloud;
        const std::string file = std::string(id) + ".pcf";
        save_cloud(out / file, cloud, CloudFormat::Pcf);
        entries.push_back({id, name, file, std::nullopt});
    }
    write_manifest(out / "manifest.txt", entries);
    return "synth: wrote " + std::to_string(count) + " " + name + " shapes of " + std::to_string(points) +
           " points to " + out.string();
}

std::string crop(const fs::path& input, CropMode mode, double ratio, std::uint64_t seed, std::size_t complete_to,
                 const fs::path& out) {
    require_file(input, "input cloud");
    const auto cloud = load_cloud(input);
    const auto res = rladnet::crop(cloud, mode, ratio, seed);
    fs::create_directories(out);
    const auto stem = input.stem().string();
    const auto ext = input.extension().string().empty() ? std::string(".xyz") : input.extension().string();
    save_cloud(out / (stem + "_partial" + ext), res.partial);
    {
        std::ofstream rm(out / (stem + "_removed.txt"));
        if (!rm) throw IoError("cannot write removed-index file");
        for (auto i : res.removed_indices) rm << i << '\n';
    }
    std::string summary = "crop: " + std::to_string(cloud.size()) + " -> " + std::to_string(res.partial.size()) +
                          " points (" + crop_mode_name(mode) + ", ratio " + fmt("%g", ratio) + ")";
    if (complete_to > 0) {
        const auto base = surrogate_complete(res.partial, complete_to, mix64(seed ^ fnv1a64("surrogate")));
        save_cloud(out / (stem + "_baseline" + ext), base);
        summary += ", baseline " + std::to_string(base.size()) + " points, cd_l2 " + fmt("%.6g", chamfer_l2(base, cloud));
    }
    return summary;
}

std::string ae_train(const fs::path& manifest, const ExperimentConfig& cfg, const fs::path& out) {
    require_file(manifest, "manifest");
    const auto shapes = manifest_shapes(read_manifest(manifest));
    AEArchitecture arch = cfg.ae_arch;
    arch.output_points = shapes.front().size();
    const auto res = train_ae(shapes, arch, cfg.ae_train);
    fs::create_directories(out);
    save_ae(out, res.model);
    std::ofstream csv(out / "ae_loss.csv");
    if (!csv) throw IoError("cannot write ae_loss.csv");
    csv.precision(10);
    csv << "epoch,loss\n";
    for (std::size_t e = 0; e < res.epoch_loss.size(); ++e) csv << e << ',' << res.epoch_loss[e] << '\n';
    char sum[32];
    std::snprintf(sum, sizeof sum, "%016llx", static_cast<unsigned long long>(decoder_checksum(res.model)));
    return "ae-train: " + std::to_string(shapes.size()) + " shapes, " + std::to_string(res.epoch_loss.size()) +
           " epochs, loss " + fmt("%.6g", res.epoch_loss.front()) + " -> " + fmt("%.6g", res.epoch_loss.back()) +
           ", decoder " + sum;
}

std::string gfv_export(const fs::path& ae_dir, const fs::path& manifest, const fs::path& out_file) {
    require_file(ae_dir, "autoencoder");
    require_file(manifest, "manifest");
    const auto ae = load_ae(ae_dir);
    std::vector<Completion> comps;
    for (const auto& e : read_manifest(manifest)) {
        require_file(e.path, "baseline completion");
        comps.push_back({e.id, e.category, load_cloud(e.path), fs::absolute(e.path), e.gt_path});
        if (comps.back().gt_path) comps.back().gt_path = fs::absolute(*e.gt_path);
    }
    const auto records = export_gfv_dataset(ae, comps);
    if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
    write_gfv_dataset(out_file, records);
    std::size_t with_gt = 0;
    for (const auto& r : records) with_gt += r.gt_path ? 1 : 0;
    return "gfv-export: " + std::to_string(records.size()) + " records (" + std::to_string(with_gt) +
           " with gt) to " + out_file.string();
}

std::string param_report(const TD3Config& rl) {
    const auto a = actor_parameter_count(rl);
    const auto c = critic_parameter_count(rl);
    const bool twin = rl.agent == AgentKind::TD3;
    return "actor_params=" + std::to_string(a) + " (" + fmt("%.3f", static_cast<double>(a) / 1e6) +
           "M) critic_params=" + std::to_string(c) + " x" + (twin ? "2" : "1");
}

std::string rl_train(const fs::path& ae_dir, const fs::path& gfv_file, const ExperimentConfig& cfg, const fs::path& out) {
    require_file(ae_dir, "autoencoder");
    require_file(gfv_file, "GFV dataset");
    const auto decoder_file = decoder_checkpoint_path(ae_dir);
    const std::string decoder_before = file_bytes(decoder_file);
    const auto ae = load_ae(ae_dir);
    if (!ae.decoder_frozen) throw ContractViolation("rl-train: the autoencoder decoder is not frozen (train it first)");

    std::vector<LatentSample> samples;
    for (const auto& r : read_gfv_dataset(gfv_file)) {
        if (!r.gt_path) throw ContractViolation("rl-train: record " + r.id + " has no ground-truth reference");
        require_file(r.baseline_path, "baseline completion");
        require_file(*r.gt_path, "ground truth");
        samples.push_back({r.z, load_cloud(r.baseline_path), load_cloud(*r.gt_path)});
    }
    if (samples.empty()) throw InvalidArgument("rl-train: empty GFV dataset");
    LatentRefineEnv env(ae, std::move(samples), cfg.env);
    const auto res = cfg.rl.agent == AgentKind::DDPG ? ddpg_train(env, cfg.rl) : td3_train(env, cfg.rl);

    fs::create_directories(out);
    save_policy(out / "policy.rladnp", res.policy, cfg.rl, cfg.env);
    write_curves_csv(out / "curves.csv", res.curves);
    if (file_bytes(decoder_file) != decoder_before)
        throw ContractViolation("rl-train: decoder checkpoint changed during training");

    double tail = 0.0;
    std::size_t n = 0;
    for (std::size_t i = res.curves.size() - std::min<std::size_t>(res.curves.size(), 1000); i < res.curves.size(); ++i, ++n)
        tail += res.curves[i].reward;
    return std::string("rl-train: agent=") + agent_name(cfg.rl.agent) + " iterations=" +
           std::to_string(res.curves.size()) + " " + param_report(cfg.rl) + " mean_reward_last=" +
           fmt("%.6g", n ? tail / static_cast<double>(n) : 0.0);
}

std::string bank_build(const fs::path& manifest, const std::optional<std::string>& category,
                       const ExperimentConfig& cfg, const fs::path& out_file) {
    require_file(manifest, "manifest");
    auto entries = read_manifest(manifest);
    if (category) std::erase_if(entries, [&](const ManifestEntry& e) { return e.category != *category; });
    if (entries.empty()) throw InvalidArgument("bank-build: no shapes for the requested category");
    const std::string cat = category ? *category : entries.front().category;
    const auto bank = build_feature_bank(manifest_shapes(entries), cat, cfg.selector);
    if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
    write_feature_bank(out_file, bank);
    return "bank-build: " + std::to_string(bank.descriptors.size()) + " descriptors of dim " +
           std::to_string(bank.dim) + " for " + cat + " to " + out_file.string();
}

std::string refine(const fs::path& ae_dir, const fs::path& policy_path, const fs::path& input,
                   const std::optional<fs::path>& bank_path, const std::optional<fs::path>& gt_path,
                   const ExperimentConfig& cfg, const fs::path& out) {
    require_file(ae_dir, "autoencoder");
    require_file(policy_path, "policy");
    require_file(input, "input cloud");
    const auto ae = load_ae(ae_dir);
    const auto lp = load_policy(policy_path);
    const auto base = load_cloud(input);
    const Gfv z = encode(ae, base);
    const Gfv z2 = rladnet::refine(lp.policy, z, lp.env_cfg);
    const auto refined = decode(ae, z2);
    fs::create_directories(out);
    save_cloud(out / "refined.pcf", refined, CloudFormat::Pcf);
    std::string summary = "refine: " + std::to_string(refined.size()) + " points";
    std::optional<PointCloud> gt;
    if (gt_path) {
        require_file(*gt_path, "ground truth");
        gt = load_cloud(*gt_path);
        summary += ", cd_base " + fmt("%.6g", chamfer_l2(base, *gt)) + ", cd_refined " + fmt("%.6g", chamfer_l2(refined, *gt));
    }
    if (bank_path) {
        require_file(*bank_path, "feature bank");
        const auto bank = read_feature_bank(*bank_path);
        const auto rec = select(input.stem().string(), base, refined, bank, gt ? &*gt : nullptr, cfg.selector);
        save_cloud(out / "selected.pcf", rec.chosen == Choice::Refined ? refined : base, CloudFormat::Pcf);
        std::ofstream csv(out / "selection.csv");
        if (!csv) throw IoError("cannot write selection.csv");
        csv.precision(10);
        csv << "id,chosen,criterion,q_base,q_ref\n"
            << rec.id << ',' << choice_name(rec.chosen) << ',' << criterion_name(rec.criterion) << ',' << rec.q_base
            << ',' << rec.q_ref << '\n';
        summary += std::string(", selected ") + choice_name(rec.chosen);
    }
    return summary;
}

std::string evaluate(const fs::path& pred_path, const fs::path& gt_path, double tau_fraction, const fs::path& out) {
    require_file(pred_path, "prediction");
    require_file(gt_path, "ground truth");
    const auto rep = fscore(load_cloud(pred_path), load_cloud(gt_path), tau_fraction);
    fs::create_directories(out);
    std::ofstream csv(out / "evaluate.csv");
    if (!csv) throw IoError("cannot write evaluate.csv");
    csv.precision(10);
    csv << "pred,gt,cd_l2,fscore,precision,recall,tau\n"
        << pred_path.string() << ',' << gt_path.string() << ',' << rep.cd_l2 << ',' << rep.fscore << ','
        << rep.precision << ',' << rep.recall << ',' << rep.tau << '\n';
    return "evaluate: cd_l2=" + fmt("%.9g", rep.cd_l2) + " fscore=" + fmt("%.9g", rep.fscore);
}

std::string pipeline(const ExperimentConfig& cfg, const fs::path& out, bool verbose) {
    const auto res = run_pipeline(cfg, out, verbose ? &std::cerr : nullptr);
    std::size_t refined = 0;
    for (const auto& s : res.samples) refined += s.selection.chosen == Choice::Refined ? 1 : 0;
    std::string cats;
    for (const auto& r : res.metrics)
        if (r.method == "selected")
            cats += " " + r.category + "=" + fmt("%.6g", r.mean_cd_l2);
    return "pipeline: " + std::to_string(res.metrics.size() / 3) + " categories, " + std::to_string(res.samples.size()) +
           " test samples, refined chosen " + std::to_string(refined) + ", selected cd_l2" + cats;
}

}  // namespace rladnet::commands
