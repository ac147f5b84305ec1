#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "autoencoder/autoencoder.hpp"

namespace rladnet {

struct GfvRecord {
    std::string id;
    std::string category;
    Gfv z;
    std::filesystem::path baseline_path;
    std::optional<std::filesystem::path> gt_path;
    friend bool operator==(const GfvRecord&, const GfvRecord&) = default;
};

struct Completion {
    std::string id;
    std::string category;
    PointCloud baseline;
    std::filesystem::path baseline_path;
    std::optional<std::filesystem::path> gt_path;
};

// One record per completion, z = encode(model, baseline), sorted by id.
// Throws InvalidArgument on duplicate ids.
std::vector<GfvRecord> export_gfv_dataset(const AEModel& model, const std::vector<Completion>& completions);

// Text format: header "GFV128 v1 count=<k>", then one line per record:
//   id category z0 ... z127 baseline_path [gt_path]
void write_gfv_dataset(const std::filesystem::path& path, const std::vector<GfvRecord>& records);
std::vector<GfvRecord> read_gfv_dataset(const std::filesystem::path& path);

}  // namespace rladnet
