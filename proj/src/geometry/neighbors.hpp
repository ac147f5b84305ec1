#pragma once

#include <cstddef>
#include <vector>

#include "geometry/point_cloud.hpp"

namespace rladnet {

struct Neighbor {
    std::size_t index;
    double squared_distance;
};

enum class NeighborBackend {
    BruteForce,  // O(N*M) reference path
    Grid,        // uniform-grid accelerator, exact (same results as BruteForce)
    Auto,        // Grid for large inputs, BruteForce otherwise
};

// Exact nearest-neighbor index over a fixed reference cloud. Ties are broken by
// the lowest reference index.
class NearestNeighborIndex {
public:
    NearestNeighborIndex(const PointCloud& reference, NeighborBackend backend = NeighborBackend::Auto);

    Neighbor nearest(const Point3& query) const;
    NeighborBackend backend() const noexcept { return backend_; }

private:
    Neighbor nearest_brute(const Point3& query) const;
    Neighbor nearest_grid(const Point3& query) const;

    const PointCloud* reference_;
    NeighborBackend backend_;

    // Grid state, cells stored as CSR (cell_start_ has cells+1 entries).
    Point3 origin_{};
    double cell_ = 1.0;
    std::array<long, 3> dims_{1, 1, 1};
    std::vector<std::size_t> cell_start_;
    std::vector<std::size_t> cell_points_;
};

// For each point of `queries`, its nearest neighbor in `reference`.
std::vector<Neighbor> nearest_neighbors(const PointCloud& queries, const PointCloud& reference,
                                        NeighborBackend backend = NeighborBackend::Auto);

}  // namespace rladnet
