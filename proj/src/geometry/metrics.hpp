#pragma once

#include "geometry/neighbors.hpp"
#include "geometry/point_cloud.hpp"

namespace rladnet {

struct MetricReport {
    double cd_l2 = 0.0;
    double fscore = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double tau = 0.0;  // absolute distance threshold
};

// Sum of the two directional means of squared nearest-neighbour distances.
// Not halved, not rooted.
double chamfer_l2(const PointCloud& a, const PointCloud& b,
                  NeighborBackend backend = NeighborBackend::Auto);

// F-score at tau = tau_fraction * bbox-diagonal(gt). A point is matched when
// its nearest neighbour on the other side is at distance <= tau.
// Throws DegenerateGeometry when gt has zero diagonal.
MetricReport fscore(const PointCloud& pred, const PointCloud& gt, double tau_fraction,
                    NeighborBackend backend = NeighborBackend::Auto);

double harmonic_fscore(double precision, double recall) noexcept;

}  // namespace rladnet
