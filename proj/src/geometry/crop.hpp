#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geometry/point_cloud.hpp"

namespace rladnet {

struct CropResult {
    PointCloud partial;
    std::vector<std::size_t> removed_indices;  // strictly increasing
    Point3 anchor;                             // unit direction or seed point used
};

enum class CropMode { Spherical, SeedProximity };

// floor(ratio * n), robust to ratios like 0.29 that are not exact in binary.
std::size_t removal_count(double ratio, std::size_t n);

// Removes the floor(ratio*N) points closest to a random unit vector treated as
// a point. Inputs are expected to live in the unit ball.
CropResult crop_spherical(const PointCloud& src, double ratio, std::uint64_t rng_seed);

// Removes the floor(ratio*N) points nearest to a uniformly chosen seed point
// (the seed itself included).
CropResult crop_seed_proximity(const PointCloud& src, double deletion_ratio, std::uint64_t rng_seed);

CropResult crop(const PointCloud& src, CropMode mode, double ratio, std::uint64_t rng_seed);

}  // namespace rladnet
