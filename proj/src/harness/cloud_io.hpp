#pragma once

#include <filesystem>
#include <string>

#include "geometry/point_cloud.hpp"

namespace rladnet {

enum class CloudFormat { Xyz, Pcf };

// Chooses by extension: ".pcf" -> Pcf, anything else -> Xyz.
CloudFormat format_for(const std::filesystem::path& path);
CloudFormat parse_cloud_format(const std::string& name);

// xyz: ASCII, one "x y z" triple per line, 9 significant digits.
// pcf: "PCF1", u32 LE count, then count f32 LE triples.
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format);
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud load_cloud(const std::filesystem::path& path);

}  // namespace rladnet
