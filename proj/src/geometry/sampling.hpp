#pragma once

#include <cstddef>
#include <vector>

#include "geometry/point_cloud.hpp"

namespace rladnet {

// Greedy farthest point sampling. The first index is `start_index`; each next
// index maximises the minimum distance to the already-selected set (lowest
// index on ties).
std::vector<std::size_t> farthest_point_sample(const PointCloud& src, std::size_t m,
                                               std::size_t start_index);

// k nearest points to `query`, ascending distance, lowest index on ties.
std::vector<std::size_t> knn(const PointCloud& src, const Point3& query, std::size_t k);

struct Normalization {
    PointCloud cloud;
    Point3 centroid;
    double scale;  // max distance from centroid, or 1 for a single-point cloud
};

Normalization normalize_unit_sphere(const PointCloud& src);

// Maps a normalized cloud back: p * scale + centroid.
PointCloud denormalize(const PointCloud& normalized, const Point3& centroid, double scale);

// Maps a cloud into a frame computed elsewhere: (p - centroid) / scale.
PointCloud apply_normalization(const PointCloud& cloud, const Point3& centroid, double scale);

}  // namespace rladnet
