// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "autoencoder/autoencoder.hpp"
#include "geometry/crop.hpp"
#include "geometry/metrics.hpp"
#include "geometry/sampling.hpp"
#include "harness/synthetic.hpp"
#include "refiner/agent.hpp"
#include "refiner/env.hpp"
#include "support/gradchecks.hpp"
#include "support/oracles.hpp"
#include "support/stub_env.hpp"

using namespace rladnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

const fs::path kWork = RLADNET_WORK_DIR;
const fs::path kSource = RLADNET_SOURCE_DIR;
const std::string kCli = RLADNET_CLI_PATH;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs the CLI with stdout and stderr captured; returns the exit status.
int run_cli(const std::string& args, std::string& output) {
    const fs::path log = kWork / "cli_last.log";
    const std::string cmd = "'" + kCli + "' " + args + " > '" + log.string() + "' 2>&1";
    const int rc = std::system(cmd.c_str());
    output = slurp(log);
    return rc;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double rel_err(double got, double want) { return std::fabs(got - want) / std::max(std::fabs(want), 1e-300); }

Outcome metric_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 256);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto a = oracle::random_cloud(rng, size(rng));
        const auto b = oracle::random_cloud(rng, std::max<std::size_t>(2, size(rng)));
        worst = std::max(worst, rel_err(chamfer_l2(a, b), oracle::chamfer(a, b)));
        const auto got = fscore(a, b, 0.05);
        const auto want = oracle::fscore(a, b, 0.05);
        for (auto [g, w] : {std::pair{got.fscore, want.fscore}, {got.precision, want.precision},
                            {got.recall, want.recall}, {got.tau, want.tau}})
            worst = std::max(worst, w == 0.0 ? std::fabs(g) : rel_err(g, w));
    }
    return {worst <= 1e-9, fmt("200 pairs, worst relative error %.3g", worst)};
}

Outcome gradient_fidelity() {
    double worst = 0.0;
    std::size_t checked = 0;
    std::string parts;
    const std::vector<std::pair<const char*, std::function<diff::GradCheckReport(std::uint64_t)>>> checks{
        {"encoder", [](std::uint64_t s) { return gradchecks::encoder(s); }},
        {"decoder", [](std::uint64_t s) { return gradchecks::decoder(s); }},
        {"actor", [](std::uint64_t s) { return gradchecks::actor(s); }},
        {"twin-critics", [](std::uint64_t s) { return gradchecks::twin_critics(s); }}};
    for (const auto& [name, fn] : checks) {
        diff::GradCheckReport rep;
        for (std::uint64_t seed : {1, 2, 3}) rep.merge(fn(seed));
        worst = std::max(worst, rep.max_relative_error);
        checked += rep.checked;
        parts += std::string(parts.empty() ? "" : ", ") + name + fmt(" %.2g", rep.max_relative_error);
    }
    return {worst <= 1e-4, fmt("%.0f entries over 3 seeds; ", static_cast<double>(checked)) + parts};
}

Outcome crop_arithmetic() {
    const auto cloud = generate_synthetic(random_shape_spec(ShapeFamily::WingedCross, 2048, 5));
    const auto seed40 = crop(cloud, CropMode::SeedProximity, 0.4, 1).partial.size();
    const auto sph25 = crop(cloud, CropMode::Spherical, 0.25, 2).partial.size();
    const auto sph50 = crop(cloud, CropMode::Spherical, 0.5, 3).partial.size();
    return {seed40 == 1229 && sph25 == 1536 && sph50 == 1024,
            fmt("seed-proximity 40%% -> %.0f, spherical 25%% -> %.0f, 50%% -> %.0f", double(seed40), double(sph25),
                double(sph50))};
}

Outcome reward_identity() {
    AEArchitecture arch;
    arch.point_widths = {3, 32, 64};
    arch.head_widths = {64, kGfvDim};
    arch.decoder_hidden = {64, 128};
    arch.output_points = 64;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(-2.0, 2.0), lam(0.0, 0.1), alpha(0.01, 0.5);
    std::uniform_int_distribution<std::size_t> size(8, 128);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const AEModel ae = AEModel::initialized(arch, static_cast<std::uint64_t>(t % 10));
        const auto base = oracle::random_cloud(rng, size(rng));
        const auto gt = oracle::random_cloud(rng, size(rng));
        Gfv z;
        for (std::size_t i = 0; i < kGfvDim; ++i) z[i] = static_cast<float>(n(rng));
        std::vector<float> a(kGfvDim);
        for (auto& x : a) x = static_cast<float>(u(rng));
        const RefineEnvConfig cfg{alpha(rng), 1.0, lam(rng)};
        const auto r = env_step(ae, z, a, &gt, base, cfg);
        const double resid = r.reward + chamfer_l2(r.refined, gt) +
                             cfg.magnitude_penalty * squared_norm(clamp_action(a, cfg.action_bound)) -
                             chamfer_l2(base, gt);
        worst = std::max(worst, std::fabs(resid));
    }
    return {worst <= 1e-9, fmt("1000 tuples, worst |residual| %.3g", worst)};
}

Outcome ae_desk_training() {
    const AEArchitecture arch = [] {
        AEArchitecture a;
        a.output_points = 256;
        return a;
    }();
    bool ok = true;
    std::string detail;
    double worst_perm = 0.0;
    for (auto family : {ShapeFamily::BoxFrame, ShapeFamily::WingedCross, ShapeFamily::MultiSphere}) {
        std::vector<PointCloud> shapes;
        for (std::uint64_t i = 0; i < 100; ++i)
            shapes.push_back(normalize_unit_sphere(generate_synthetic(random_shape_spec(family, 256, 1000 + i))).cloud);
        AETrainConfig tc;
        tc.epochs = 60;
        tc.seed = 17 + static_cast<std::uint64_t>(family);
        const AEModel untrained = AEModel::initialized(arch, tc.seed);
        double initial = 0.0;
        for (const auto& s : shapes) initial += chamfer_l2(decode(untrained, encode(untrained, s)), s);
        initial /= static_cast<double>(shapes.size());
        const auto res = train_ae(shapes, arch, tc);
        double smoothed = 0.0;
        for (std::size_t e = res.epoch_loss.size() - 5; e < res.epoch_loss.size(); ++e) smoothed += res.epoch_loss[e] / 5.0;
        const double ratio = smoothed / initial;
        ok = ok && ratio < 0.2;

        std::mt19937_64 rng(5);
        for (int t = 0; t < 5; ++t) {
            const auto& s = shapes[static_cast<std::size_t>(t)];
            const Gfv a = encode(res.model, s), b = encode(res.model, oracle::permuted(s, rng));
            for (std::size_t i = 0; i < kGfvDim; ++i) worst_perm = std::max(worst_perm, double(std::fabs(a[i] - b[i])));
        }
        detail += std::string(detail.empty() ? "" : "; ") + family_name(family) +
                  fmt(" initial %.4g -> smoothed %.4g (ratio %.3f, epoch-0 mean %.4g)", initial, smoothed, ratio,
                      res.epoch_loss.front());
    }
    ok = ok && worst_perm <= 1e-6;
    return {ok, detail + fmt("; permutation max |dz| %.2g", worst_perm)};
}

Outcome td3_stub() {
    // Four stored states; the optimum action per state is -0.4 z (reward 0).
    stub::QuadraticTargetEnv env(4, 1);
    TD3Config cfg;
    cfg.actor_hidden = {350, 350};
    cfg.critic_hidden = {350, 350};
    cfg.actor_lr = 1e-5;
    cfg.critic_lr = 3e-4;
    cfg.batch_size = 128;
    cfg.warmup_iterations = 2000;
    cfg.exploration_sigma = 0.1;
    cfg.iterations = 20000;
    cfg.seed = 1;

    const double initial = env.evaluate(ActorCriticAgent(cfg, 1.0).policy());
    const double initial_ddpg = env.evaluate(ActorCriticAgent(cfg.as_ddpg(), 1.0).policy());
    auto window_variance = [](const TrainResult& r) {
        const std::size_t from = r.curves.size() - 5000;
        double m = 0.0, v = 0.0;
        for (std::size_t i = from; i < r.curves.size(); ++i) m += r.curves[i].reward / 5000.0;
        for (std::size_t i = from; i < r.curves.size(); ++i) v += std::pow(r.curves[i].reward - m, 2) / 4999.0;
        return v;
    };
    const auto td3 = td3_train(env, cfg);
    const double td3_final = env.evaluate(td3.policy);
    const double td3_closed = (td3_final - initial) / (0.0 - initial);
    const auto ddpg = ddpg_train(env, cfg);
    const double ddpg_final = env.evaluate(ddpg.policy);
    const double ddpg_closed = (ddpg_final - initial_ddpg) / (0.0 - initial_ddpg);
    const double v_td3 = window_variance(td3), v_ddpg = window_variance(ddpg);
    const bool ok = td3_closed >= 0.9 && ddpg_final > initial_ddpg && v_ddpg >= v_td3;
    return {ok, fmt("TD3 reward %.3f -> %.3f (%.1f%% of gap closed); ", initial, td3_final, 100 * td3_closed) +
                    fmt("DDPG %.3f -> %.3f (%.1f%%); ", initial_ddpg, ddpg_final, 100 * ddpg_closed) +
                    fmt("last-5000 reward variance TD3 %.4g, DDPG %.4g", v_td3, v_ddpg)};
}

// Shared by criteria 7 and 9: two CLI pipeline runs on the desk config.
struct DeskRuns {
    bool ran = false;
    int rc_a = -1, rc_b = -1;
    std::string log;
    double seconds_a = 0.0;
};

DeskRuns& desk_runs() {
    static DeskRuns runs;
    if (runs.ran) return runs;
    runs.ran = true;
    const auto config = (kSource / "configs" / "desk.json").string();
    for (const char* tag : {"a", "b"}) {
        fs::remove_all(kWork / "desk" / tag);
        const auto t0 = std::chrono::steady_clock::now();
        std::string out;
        const int rc = run_cli("--config '" + config + "' --seed 7 --out '" + (kWork / "desk" / tag).string() + "' pipeline", out);
        if (std::string(tag) == "a") {
            runs.rc_a = rc;
            runs.seconds_a = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            runs.log = out;
        } else {
            runs.rc_b = rc;
        }
    }
    return runs;
}

Outcome end_to_end() {
    const auto& runs = desk_runs();
    if (runs.rc_a != 0) return {false, "pipeline failed: " + runs.log};
    const auto sel = read_csv(kWork / "desk" / "a" / "selections.csv");
    std::size_t degraded = 0;
    for (const auto& r : sel) {
        const double cb = std::stod(r[6]), cr = std::stod(r[7]), cs = std::stod(r[8]);
        if (cs > std::min(cb, cr)) ++degraded;
    }
    const auto metrics = read_csv(kWork / "desk" / "a" / "metrics.csv");
    std::map<std::string, std::map<std::string, double>> cd;
    std::map<std::string, std::string> refined_count;
    for (const auto& r : metrics) {
        cd[r[0]][r[1]] = std::stod(r[2]);
        refined_count[r[0]] = r[5] + "/" + r[4];
    }
    bool means_ok = true;
    int strictly_better = 0;
    std::string detail;
    for (const auto& [cat, m] : cd) {
        means_ok = means_ok && m.at("selected") <= m.at("baseline");
        strictly_better += m.at("selected") < m.at("baseline") ? 1 : 0;
        detail += cat + fmt(" base %.4g ref %.4g sel %.4g", m.at("baseline"), m.at("refined"), m.at("selected")) +
                  " (refined chosen " + refined_count[cat] + "); ";
    }
    const bool ok = !sel.empty() && degraded == 0 && means_ok && strictly_better >= 1 && cd.size() == 3;
    return {ok, fmt("%.0f test samples, %.0f degraded; ", double(sel.size()), double(degraded)) + detail +
                    fmt("pipeline %.0f s", runs.seconds_a)};
}

Outcome frozen_decoder() {
    const fs::path dir = kWork / "frozen";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "tiny.json") << R"({"categories": ["box-frame"], "points": 64, "seed": 3,
      "ae": {"point_widths": [3, 32, 64], "head_widths": [64, 128], "decoder_hidden": [64, 128], "epochs": 5, "batch_size": 8},
      "rl": {"iterations": 300, "warmup_iterations": 50, "batch_size": 16, "actor_hidden": [64, 64], "critic_hidden": [64, 64]}})";
    const std::string cfg = "--config '" + (dir / "tiny.json").string() + "' ";
    std::string out;
    if (run_cli(cfg + "--out '" + (dir / "shapes").string() + "' synth --family box-frame --count 12 --points 64", out))
        return {false, "synth failed: " + out};
    if (run_cli(cfg + "--out '" + (dir / "ae").string() + "' ae-train --manifest '" + (dir / "shapes" / "manifest.txt").string() + "'", out))
        return {false, "ae-train failed: " + out};
    std::ofstream manifest(dir / "baselines.txt");
    for (int i = 0; i < 12; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "box-frame-%04d", i);
        const auto shape = dir / "shapes" / (std::string(id) + ".pcf");
        if (run_cli(cfg + "--out '" + (dir / "crops").string() + "' crop '" + shape.string() + "' --complete 64", out))
            return {false, "crop failed: " + out};
        manifest << id << " box-frame " << (dir / "crops" / (std::string(id) + "_baseline.pcf")).string() << ' '
                 << shape.string() << '\n';
    }
    manifest.close();
    if (run_cli(cfg + "--out '" + (dir / "gfv").string() + "' gfv-export --ae '" + (dir / "ae").string() + "' --manifest '" +
                    (dir / "baselines.txt").string() + "'", out))
        return {false, "gfv-export failed: " + out};
    const std::string before = slurp(dir / "ae" / "decoder.rladnp");
    bool all_same = true;
    std::string summaries;
    for (const char* agent : {"td3", "ddpg"}) {
        if (run_cli(cfg + "--out '" + (dir / agent).string() + "' rl-train --agent " + agent + " --ae '" +
                        (dir / "ae").string() + "' --gfv '" + (dir / "gfv" / "gfv.txt").string() + "'", out))
            return {false, std::string("rl-train failed: ") + out};
        all_same = all_same && slurp(dir / "ae" / "decoder.rladnp") == before;
        summaries += agent + std::string(" curves ") + (fs::exists(dir / agent / "curves.csv") ? "written" : "missing") + "; ";
    }
    return {all_same && !before.empty(),
            summaries + fmt("decoder checkpoint %.0f bytes, ", double(before.size())) +
                (all_same ? "byte-identical after td3 and ddpg rl-train" : "CHANGED")};
}

Outcome determinism() {
    const auto& runs = desk_runs();
    if (runs.rc_a != 0 || runs.rc_b != 0) return {false, "pipeline failed: " + runs.log};
    bool same = true;
    std::string detail;
    for (const char* f : {"metrics.csv", "selections.csv", "trajectories.txt"}) {
        const auto a = slurp(kWork / "desk" / "a" / f), b = slurp(kWork / "desk" / "b" / f);
        same = same && a == b && !a.empty();
        detail += std::string(f) + (a == b ? " identical" : " DIFFERENT") + fmt(" (%.0f bytes); ", double(a.size()));
    }
    return {same, detail + "two `pipeline --config configs/desk.json --seed 7` runs"};
}

Outcome param_report() {
    std::string out;
    if (run_cli("rl-train --dry-run", out) != 0) return {false, "CLI failed: " + out};
    std::smatch m;
    if (!std::regex_search(out, m, std::regex("actor_params=(\\d+)"))) return {false, "no actor count in: " + out};
    const double actor = std::stod(m[1]);
    const double dev = std::fabs(actor - 210000.0) / 210000.0;
    std::string line = out.substr(0, out.find('\n'));
    return {dev <= 0.05, "CLI: " + line + fmt(" (%.2f%% from 0.210M)", 100 * dev)};
}

}  // namespace

int main(int argc, char** argv) {
    fs::create_directories(kWork);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"metric oracle equivalence", metric_oracle},
        {"gradient fidelity", gradient_fidelity},
        {"crop arithmetic", crop_arithmetic},
        {"reward identity", reward_identity},
        {"AE desk-scale training", ae_desk_training},
        {"TD3 synthetic-optimum check", td3_stub},
        {"end-to-end non-degradation", end_to_end},
        {"frozen-decoder contract", frozen_decoder},
        {"determinism", determinism},
        {"parameter-count report", param_report}};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "criterion " << id << " [" << (o.pass ? "PASS" : "FAIL") << "] " << criteria[i].first << ": "
                  << o.detail << fmt(" (%.1f s)", secs) << std::endl;
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
