#pragma once

#include <cstdint>

#include "geometry/point_cloud.hpp"

namespace rladnet {

// Stand-in for a pretrained completion backbone: the partial cloud plus its
// mirror image across its principal plane (the plane through the centroid
// orthogonal to the least-variance axis), resampled with replacement to
// `target_size` points and jittered. Deliberately imperfect.
PointCloud surrogate_complete(const PointCloud& partial, std::size_t target_size, std::uint64_t seed,
                              double jitter_fraction = 0.01);

}  // namespace rladnet
