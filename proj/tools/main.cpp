#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rladnet/rladnet.h"

namespace {

int report(rladnet_status st, char* summary) {
    if (st != RLADNET_OK) {
        std::cerr << "error (" << rladnet_status_string(st) << "): " << rladnet_last_error() << '\n';
        return 2;
    }
    std::cout << summary << '\n';
    rladnet_string_free(summary);
    return 0;
}

const char* opt_c(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent-space refinement of point cloud completions"};
    app.failure_message(CLI::FailureMessage::help);
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Seed (overrides the config)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("-v,--verbose", verbose, "Progress on stderr");

    std::string family, input, mode, manifest, ae_dir, gfv_file, agent, policy, bank, gt, category, pred;
    std::size_t count = 100, points = 256, complete_to = 0;
    double ratio = 0.0, tau = 0.0;
    long iterations = -1;
    bool dry_run = false;

    auto* synth = app.add_subcommand("synth", "Generate normalised synthetic shapes and a manifest");
    synth->add_option("--family", family, "box-frame | winged-cross | multi-sphere")->required();
    synth->add_option("--count", count, "Number of shapes");
    synth->add_option("--points", points, "Points per shape");

    auto* crop = app.add_subcommand("crop", "Crop a complete cloud into a partial one");
    crop->add_option("input", input, "Input cloud (.xyz or .pcf)")->required();
    crop->add_option("--mode", mode, "spherical | seed-proximity");
    crop->add_option("--ratio", ratio, "Fraction of points removed");
    crop->add_option("--complete", complete_to, "Also write a surrogate completion of this size");

    auto* ae_train = app.add_subcommand("ae-train", "Train the point cloud autoencoder");
    ae_train->add_option("--manifest", manifest, "Manifest of complete shapes")->required();

    auto* gfv = app.add_subcommand("gfv-export", "Encode baseline completions into a GFV dataset");
    gfv->add_option("--ae", ae_dir, "Autoencoder directory")->required();
    gfv->add_option("--manifest", manifest, "Manifest: id category baseline [gt]")->required();

    auto* rl = app.add_subcommand("rl-train", "Train the latent refinement agent");
    rl->add_option("--agent", agent, "td3 | ddpg")->check(CLI::IsMember({"td3", "ddpg"}));
    rl->add_option("--ae", ae_dir, "Autoencoder directory");
    rl->add_option("--gfv", gfv_file, "GFV dataset file");
    rl->add_option("--iterations", iterations, "Training iterations (overrides the config)");
    rl->add_flag("--dry-run", dry_run, "Only report parameter counts");

    auto* bank_build = app.add_subcommand("bank-build", "Build a PointNN feature bank");
    bank_build->add_option("--manifest", manifest, "Manifest of reference shapes")->required();
    bank_build->add_option("--category", category, "Only use this category");

    auto* refine = app.add_subcommand("refine", "Refine one completion");
    refine->add_option("input", input, "Baseline completion")->required();
    refine->add_option("--ae", ae_dir, "Autoencoder directory")->required();
    refine->add_option("--policy", policy, "Policy checkpoint")->required();
    refine->add_option("--bank", bank, "Feature bank for selection");
    refine->add_option("--gt", gt, "Ground truth (enables the dual criterion)");

    auto* evaluate = app.add_subcommand("evaluate", "Chamfer-L2 and F-score of a prediction");
    evaluate->add_option("pred", pred, "Predicted cloud")->required();
    evaluate->add_option("gt", gt, "Ground-truth cloud")->required();
    evaluate->add_option("--tau", tau, "F-score threshold as a fraction of the gt bbox diagonal");

    auto* pipeline = app.add_subcommand("pipeline", "Run the full experiment");

    CLI11_PARSE(app, argc, argv);

    rladnet_run_options opt{opt_c(config_path), out_dir.c_str(), seed.value_or(0), seed.has_value() ? 1 : 0,
                            verbose ? 1 : 0};
    char* summary = nullptr;
    rladnet_status st = RLADNET_E_INTERNAL;
    if (*synth) st = rladnet_cmd_synth(&opt, family.c_str(), count, points, &summary);
    else if (*crop) st = rladnet_cmd_crop(&opt, input.c_str(), opt_c(mode), ratio, complete_to, &summary);
    else if (*ae_train) st = rladnet_cmd_ae_train(&opt, manifest.c_str(), &summary);
    else if (*gfv) st = rladnet_cmd_gfv_export(&opt, ae_dir.c_str(), manifest.c_str(), &summary);
    else if (*rl) {
        if (!dry_run && (ae_dir.empty() || gfv_file.empty())) {
            std::cerr << "rl-train: --ae and --gfv are required unless --dry-run is given\n\n" << rl->help();
            return 1;
        }
        st = rladnet_cmd_rl_train(&opt, opt_c(agent), opt_c(ae_dir), opt_c(gfv_file), iterations, dry_run ? 1 : 0,
                                  &summary);
    } else if (*bank_build) st = rladnet_cmd_bank_build(&opt, manifest.c_str(), opt_c(category), &summary);
    else if (*refine)
        st = rladnet_cmd_refine(&opt, ae_dir.c_str(), policy.c_str(), input.c_str(), opt_c(bank), opt_c(gt), &summary);
    else if (*evaluate) st = rladnet_cmd_evaluate(&opt, pred.c_str(), gt.c_str(), tau, &summary);
    else if (*pipeline) st = rladnet_cmd_pipeline(&opt, &summary);
    return report(st, summary);
}
