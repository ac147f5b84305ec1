#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rladnet {

// One line per entry: "id category path [gt_path]". Blank lines and lines
// starting with '#' are skipped. Relative paths resolve against the
// manifest's directory.
struct ManifestEntry {
    std::string id;
    std::string category;
    std::filesystem::path path;
    std::optional<std::filesystem::path> gt_path;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

}  // namespace rladnet
