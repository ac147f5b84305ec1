#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rladnet/rladnet.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("rladnet_capi_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string take(char* s) {
    std::string out = s ? s : "";
    rladnet_string_free(s);
    return out;
}

const char* kTinyConfig = R"({
  "categories": ["box-frame"],
  "shapes_per_category": 16,
  "points": 64,
  "seed": 5,
  "ae": {"point_widths": [3, 16, 32], "head_widths": [32, 128], "decoder_hidden": [64], "epochs": 3, "batch_size": 8},
  "rl": {"iterations": 60, "warmup_iterations": 10, "batch_size": 8, "actor_hidden": [16, 16], "critic_hidden": [16, 16]},
  "selector": {"stage_sizes": [32, 8], "k": 8, "bands": 2},
  "test_fraction": 0.3
})";

rladnet_run_options options(const fs::path& config, const fs::path& out) {
    static std::string cfg_s, out_s;
    cfg_s = config.string();
    out_s = out.string();
    return {config.empty() ? nullptr : cfg_s.c_str(), out_s.c_str(), 0, 0, 0};
}

std::vector<double> unit_cube_corners() {
    std::vector<double> xyz;
    for (int i = 0; i < 8; ++i) {
        xyz.push_back(i & 1);
        xyz.push_back((i >> 1) & 1);
        xyz.push_back((i >> 2) & 1);
    }
    return xyz;
}

}  // namespace

TEST_CASE("status strings, version and errors") {
    CHECK(std::string(rladnet_version()).size() > 0);
    CHECK(std::string(rladnet_status_string(RLADNET_OK)) == "ok");
    CHECK(std::string(rladnet_status_string(RLADNET_E_PARSE)).size() > 0);

    rladnet_cloud* c = nullptr;
    CHECK(rladnet_cloud_create(nullptr, 3, &c) == RLADNET_E_INVALID_ARGUMENT);
    CHECK(std::string(rladnet_last_error()).size() > 0);
    CHECK(c == nullptr);
    const double pt[3] = {0, 0, 0};
    CHECK(rladnet_cloud_create(pt, 0, &c) == RLADNET_E_INVALID_ARGUMENT);
    CHECK(rladnet_cloud_load("/nonexistent/x.xyz", &c) == RLADNET_E_IO);

    const auto dir = temp_dir("errors");
    std::ofstream(dir / "bad.xyz") << "1 2 3\n4 5\n";
    CHECK(rladnet_cloud_load((dir / "bad.xyz").string().c_str(), &c) == RLADNET_E_PARSE);
    CHECK(std::string(rladnet_last_error()).find(":2:") != std::string::npos);
    CHECK(rladnet_synthesize("teapot", 64, 1, &c) == RLADNET_E_INVALID_ARGUMENT);
    rladnet_cloud_destroy(nullptr);
}

TEST_CASE("clouds, metrics, crop and normalisation through the C API") {
    const auto xyz = unit_cube_corners();
    rladnet_cloud* a = nullptr;
    REQUIRE(rladnet_cloud_create(xyz.data(), 8, &a) == RLADNET_OK);
    CHECK(rladnet_cloud_size(a) == 8);
    std::vector<double> back(24);
    CHECK(rladnet_cloud_points(a, back.data(), 8) == RLADNET_OK);
    CHECK(back == xyz);
    CHECK(rladnet_cloud_points(a, back.data(), 4) == RLADNET_E_INVALID_ARGUMENT);

    double cd = -1;
    CHECK(rladnet_chamfer_l2(a, a, &cd) == RLADNET_OK);
    CHECK(cd == 0.0);
    rladnet_metric_report rep{};
    CHECK(rladnet_fscore(a, a, 0.01, &rep) == RLADNET_OK);
    CHECK(rep.fscore == 1.0);
    CHECK(rep.tau == doctest::Approx(0.01 * std::sqrt(3.0)));

    const double one[3] = {0.5, 0.5, 0.5};
    rladnet_cloud* p = nullptr;
    REQUIRE(rladnet_cloud_create(one, 1, &p) == RLADNET_OK);
    CHECK(rladnet_chamfer_l2(a, p, &cd) == RLADNET_OK);
    CHECK(cd == doctest::Approx(0.75 + 0.75));
    CHECK(rladnet_fscore(p, p, 0.01, &rep) == RLADNET_E_DEGENERATE_GEOMETRY);

    rladnet_cloud* n = nullptr;
    double c[3], scale = 0;
    CHECK(rladnet_normalize(a, &n, c, &scale) == RLADNET_OK);
    CHECK(c[0] == doctest::Approx(0.5));
    CHECK(scale == doctest::Approx(std::sqrt(0.75)));
    rladnet_cloud_destroy(n);

    rladnet_cloud* big = nullptr;
    REQUIRE(rladnet_synthesize("winged-cross", 2048, 3, &big) == RLADNET_OK);
    rladnet_cloud* part = nullptr;
    size_t removed = 0;
    CHECK(rladnet_crop(big, RLADNET_CROP_SEED_PROXIMITY, 0.4, 1, &part, &removed) == RLADNET_OK);
    CHECK(rladnet_cloud_size(part) == 1229);
    CHECK(removed == 2048 - 1229);
    rladnet_cloud_destroy(part);
    CHECK(rladnet_crop(big, RLADNET_CROP_SPHERICAL, 0.25, 1, &part, &removed) == RLADNET_OK);
    CHECK(rladnet_cloud_size(part) == 1536);
    rladnet_cloud* comp = nullptr;
    CHECK(rladnet_surrogate_complete(part, 2048, 9, &comp) == RLADNET_OK);
    CHECK(rladnet_cloud_size(comp) == 2048);
    CHECK(rladnet_crop(big, RLADNET_CROP_SPHERICAL, 1.5, 1, &part, &removed) == RLADNET_E_INVALID_ARGUMENT);

    const auto dir = temp_dir("clouds");
    CHECK(rladnet_cloud_save(comp, (dir / "c.pcf").string().c_str(), nullptr) == RLADNET_OK);
    rladnet_cloud* loaded = nullptr;
    CHECK(rladnet_cloud_load((dir / "c.pcf").string().c_str(), &loaded) == RLADNET_OK);
    CHECK(rladnet_chamfer_l2(loaded, comp, &cd) == RLADNET_OK);
    CHECK(cd < 1e-12);
    for (auto* h : {a, p, big, part, comp, loaded}) rladnet_cloud_destroy(h);
}

TEST_CASE("parameter counts") {
    size_t actor = 0, critic = 0;
    CHECK(rladnet_param_counts(nullptr, &actor, &critic) == RLADNET_OK);
    CHECK(actor == 212928);
    CHECK(critic == 213151);
    CHECK(rladnet_param_counts("/nonexistent.json", &actor, &critic) != RLADNET_OK);
}

TEST_CASE("command workflow: synth, ae-train, crop, gfv-export, rl-train, bank, refine, evaluate") {
    const auto dir = temp_dir("workflow");
    std::ofstream(dir / "tiny.json") << kTinyConfig;
    const auto cfg = dir / "tiny.json";
    char* s = nullptr;

    auto o = options(cfg, dir / "shapes");
    REQUIRE(rladnet_cmd_synth(&o, "box-frame", 8, 64, &s) == RLADNET_OK);
    CHECK(take(s).rfind("synth:", 0) == 0);
    REQUIRE(fs::exists(dir / "shapes" / "manifest.txt"));

    o = options(cfg, dir / "ae");
    REQUIRE(rladnet_cmd_ae_train(&o, (dir / "shapes" / "manifest.txt").string().c_str(), &s) == RLADNET_OK);
    CHECK(take(s).find("decoder ") != std::string::npos);
    CHECK(fs::exists(dir / "ae" / "ae_loss.csv"));

    std::ofstream manifest(dir / "baselines.txt");
    std::ofstream no_gt(dir / "no_gt.txt");
    for (int i = 0; i < 8; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "box-frame-%04d", i);
        const auto shape = dir / "shapes" / (std::string(id) + ".pcf");
        o = options(cfg, dir / "crops");
        REQUIRE(rladnet_cmd_crop(&o, shape.string().c_str(), "spherical", 0.25, 64, &s) == RLADNET_OK);
        CHECK(take(s).find("64 -> 48 points") != std::string::npos);
        const auto baseline = dir / "crops" / (std::string(id) + "_baseline.pcf");
        CHECK(fs::exists(baseline));
        manifest << id << " box-frame " << baseline.string() << ' ' << shape.string() << '\n';
        no_gt << id << " box-frame " << baseline.string() << '\n';
    }
    manifest.close();
    no_gt.close();

    const std::string ae = (dir / "ae").string();
    o = options(cfg, dir / "gfv");
    REQUIRE(rladnet_cmd_gfv_export(&o, ae.c_str(), (dir / "baselines.txt").string().c_str(), &s) == RLADNET_OK);
    CHECK(take(s).find("8 records (8 with gt)") != std::string::npos);
    o = options(cfg, dir / "gfv_nogt");
    REQUIRE(rladnet_cmd_gfv_export(&o, ae.c_str(), (dir / "no_gt.txt").string().c_str(), &s) == RLADNET_OK);
    take(s);

    const std::string decoder_before = slurp(dir / "ae" / "decoder.rladnp");
    rladnet_ae* model = nullptr;
    REQUIRE(rladnet_ae_load(ae.c_str(), &model) == RLADNET_OK);
    std::uint64_t sum_before = 0, sum_after = 1;
    CHECK(rladnet_ae_decoder_checksum(model, &sum_before) == RLADNET_OK);

    for (const char* agent : {"td3", "ddpg"}) {
        o = options(cfg, dir / agent);
        REQUIRE(rladnet_cmd_rl_train(&o, agent, ae.c_str(), (dir / "gfv" / "gfv.txt").string().c_str(), -1, 0, &s) ==
                RLADNET_OK);
        const std::string summary = take(s);
        CHECK(summary.find(std::string("agent=") + agent) != std::string::npos);
        CHECK(summary.find("iterations=60") != std::string::npos);
        std::ifstream curves(dir / agent / "curves.csv");
        std::string header;
        std::getline(curves, header);
        CHECK(header == "iter,reward,cd_refined,cd_base,action_norm,improvement");
    }
    CHECK(slurp(dir / "ae" / "decoder.rladnp") == decoder_before);
    rladnet_ae* reloaded = nullptr;
    REQUIRE(rladnet_ae_load(ae.c_str(), &reloaded) == RLADNET_OK);
    CHECK(rladnet_ae_decoder_checksum(reloaded, &sum_after) == RLADNET_OK);
    CHECK(sum_after == sum_before);
    rladnet_ae_destroy(reloaded);

    o = options(cfg, dir / "nogt_train");
    CHECK(rladnet_cmd_rl_train(&o, "td3", ae.c_str(), (dir / "gfv_nogt" / "gfv.txt").string().c_str(), -1, 0, &s) ==
          RLADNET_E_CONTRACT_VIOLATION);
    CHECK(rladnet_cmd_rl_train(&o, "ppo", ae.c_str(), (dir / "gfv" / "gfv.txt").string().c_str(), -1, 0, &s) ==
          RLADNET_E_INVALID_ARGUMENT);

    o = options(cfg, dir / "bank");
    REQUIRE(rladnet_cmd_bank_build(&o, (dir / "shapes" / "manifest.txt").string().c_str(), nullptr, &s) == RLADNET_OK);
    CHECK(take(s).find("8 descriptors") != std::string::npos);

    const auto input = dir / "crops" / "box-frame-0000_baseline.pcf";
    const auto gt = dir / "shapes" / "box-frame-0000.pcf";
    o = options(cfg, dir / "refined");
    REQUIRE(rladnet_cmd_refine(&o, ae.c_str(), (dir / "td3" / "policy.rladnp").string().c_str(), input.string().c_str(),
                               (dir / "bank" / "bank.txt").string().c_str(), gt.string().c_str(), &s) == RLADNET_OK);
    CHECK(take(s).find("selected ") != std::string::npos);
    CHECK(fs::exists(dir / "refined" / "refined.pcf"));
    CHECK(fs::exists(dir / "refined" / "selection.csv"));

    o = options(cfg, dir / "eval");
    REQUIRE(rladnet_cmd_evaluate(&o, gt.string().c_str(), gt.string().c_str(), 0, &s) == RLADNET_OK);
    CHECK(take(s) == "evaluate: cd_l2=0 fscore=1");

    // Handle-level refinement matches a decode of the refined latent.
    rladnet_policy* pol = nullptr;
    REQUIRE(rladnet_policy_load((dir / "td3" / "policy.rladnp").string().c_str(), &pol) == RLADNET_OK);
    rladnet_cloud* base = nullptr;
    REQUIRE(rladnet_cloud_load(input.string().c_str(), &base) == RLADNET_OK);
    float z[RLADNET_GFV_DIM], z2[RLADNET_GFV_DIM];
    CHECK(rladnet_ae_encode(model, base, z) == RLADNET_OK);
    CHECK(rladnet_policy_refine(pol, z, z2) == RLADNET_OK);
    for (int i = 0; i < RLADNET_GFV_DIM; ++i) CHECK(std::fabs(z2[i] - z[i]) <= 0.1f + 1e-6f);
    rladnet_cloud* out = nullptr;
    CHECK(rladnet_ae_decode(model, z2, &out) == RLADNET_OK);
    CHECK(rladnet_cloud_size(out) == 64);

    rladnet_bank* bank = nullptr;
    REQUIRE(rladnet_bank_load((dir / "bank" / "bank.txt").string().c_str(), &bank) == RLADNET_OK);
    double q = -1;
    CHECK(rladnet_quality_score(bank, out, cfg.string().c_str(), &q) == RLADNET_OK);
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
    CHECK(rladnet_quality_score(bank, out, nullptr, &q) == RLADNET_E_INVALID_ARGUMENT);

    rladnet_bank_destroy(bank);
    rladnet_cloud_destroy(out);
    rladnet_cloud_destroy(base);
    rladnet_policy_destroy(pol);
    rladnet_ae_destroy(model);
}

TEST_CASE("dry-run parameter report and deterministic pipeline") {
    const auto dir = temp_dir("pipeline");
    char* s = nullptr;
    auto o = options({}, dir / "dry");
    REQUIRE(rladnet_cmd_rl_train(&o, "td3", nullptr, nullptr, -1, 1, &s) == RLADNET_OK);
    const std::string dry = take(s);
    CHECK(dry.find("actor_params=212928 (0.213M)") != std::string::npos);
    CHECK(dry.find("critic_params=213151 x2") != std::string::npos);

    std::ofstream(dir / "tiny.json") << kTinyConfig;
    for (const char* run : {"a", "b"}) {
        o = options(dir / "tiny.json", dir / run);
        o.seed = 7;
        o.has_seed = 1;
        REQUIRE(rladnet_cmd_pipeline(&o, &s) == RLADNET_OK);
        CHECK(take(s).rfind("pipeline:", 0) == 0);
    }
    for (const char* f : {"metrics.csv", "selections.csv", "trajectories.txt"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}
