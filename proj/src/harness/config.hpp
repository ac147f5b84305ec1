#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "autoencoder/autoencoder.hpp"
#include "geometry/crop.hpp"
#include "harness/synthetic.hpp"
#include "refiner/agent.hpp"
#include "selector/pointnn.hpp"

namespace rladnet {

// A category is either a synthetic family or a manifest of complete shapes
// ("id category path" per line).
struct CategorySource {
    std::string name;
    std::optional<ShapeFamily> family;
    std::optional<std::filesystem::path> manifest;
};

// Pretrained per-category artifacts; anything absent is trained in-run.
struct CategoryArtifacts {
    std::optional<std::filesystem::path> ae_dir;
    std::optional<std::filesystem::path> policy;
    std::optional<std::filesystem::path> bank;
};

struct ExperimentConfig {
    std::vector<CategorySource> categories;
    std::size_t shapes_per_category = 100;
    std::size_t points = 256;
    CropMode crop_mode = CropMode::Spherical;
    double crop_ratio = 0.25;
    double surrogate_jitter = 0.01;
    AEArchitecture ae_arch;
    AETrainConfig ae_train;
    TD3Config rl;
    RefineEnvConfig env;
    PointNNConfig selector;
    bool dual_criterion = true;
    double fscore_tau = 0.01;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
    // External-backbone mode: baseline completions read from <dir>/<id>.pcf
    // (or .xyz) instead of the surrogate completer.
    std::optional<std::filesystem::path> completions_dir;
    std::map<std::string, CategoryArtifacts> artifacts;

    void validate() const;
};

// Desk-scale profile: three synthetic families, 100 shapes of 256 points,
// 60 AE epochs.
ExperimentConfig desk_profile();
// Full-scale profile: 2048 points, 400 epochs, 100k TD3 iterations.
ExperimentConfig full_profile();

// Missing keys keep the values of `base`. Relative paths resolve against
// `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j, const ExperimentConfig& base,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

CropMode parse_crop_mode(const std::string& name);
const char* crop_mode_name(CropMode m) noexcept;

}  // namespace rladnet
