#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "harness/config.hpp"

namespace rladnet::commands {

namespace fs = std::filesystem;

// Every command writes its artifacts under `out` and returns a one-line
// summary.

// Normalised synthetic shapes <id>.pcf plus manifest.txt.
std::string synth(ShapeFamily family, std::size_t count, std::size_t points, std::uint64_t seed, const fs::path& out);

// <stem>_partial.<ext> and <stem>_removed.txt; with complete_to > 0 also a
// surrogate completion <stem>_baseline.<ext>.
std::string crop(const fs::path& input, CropMode mode, double ratio, std::uint64_t seed, std::size_t complete_to,
                 const fs::path& out);

// Trains on every manifest shape; writes the AE directory and ae_loss.csv.
std::string ae_train(const fs::path& manifest, const ExperimentConfig& cfg, const fs::path& out);

// Manifest lines "id category baseline_path [gt_path]" -> GFV dataset file.
std::string gfv_export(const fs::path& ae_dir, const fs::path& manifest, const fs::path& out_file);

// Actor and single-critic parameter counts for the configured widths.
std::string param_report(const TD3Config& rl);

// Trains a refiner on a GFV dataset whose records all carry gt references.
// Writes policy.rladnp (+ sidecar) and curves.csv. The AE decoder file is
// checked to be byte-identical afterwards.
std::string rl_train(const fs::path& ae_dir, const fs::path& gfv_file, const ExperimentConfig& cfg, const fs::path& out);

// Feature bank from manifest shapes (optionally only one category).
std::string bank_build(const fs::path& manifest, const std::optional<std::string>& category,
                       const ExperimentConfig& cfg, const fs::path& out_file);

// Encode, refine, decode one completion. With a bank, also selects between
// the input and the refined cloud (dual criterion when gt is given).
std::string refine(const fs::path& ae_dir, const fs::path& policy, const fs::path& input,
                   const std::optional<fs::path>& bank, const std::optional<fs::path>& gt, const ExperimentConfig& cfg,
                   const fs::path& out);

// Chamfer-L2 and F-score of pred against gt; writes evaluate.csv.
std::string evaluate(const fs::path& pred, const fs::path& gt, double tau_fraction, const fs::path& out);

std::string pipeline(const ExperimentConfig& cfg, const fs::path& out, bool verbose);

}  // namespace rladnet::commands
