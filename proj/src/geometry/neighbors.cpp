#include "geometry/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rladnet {
namespace {

constexpr std::size_t kGridThreshold = 512;

bool better(const Neighbor& cand, const Neighbor& best) noexcept {
    return cand.squared_distance < best.squared_distance ||
           (cand.squared_distance == best.squared_distance && cand.index < best.index);
}

}  // namespace

NearestNeighborIndex::NearestNeighborIndex(const PointCloud& reference, NeighborBackend backend)
    : reference_(&reference), backend_(backend) {
    if (backend_ == NeighborBackend::Auto)
        backend_ = reference.size() >= kGridThreshold ? NeighborBackend::Grid : NeighborBackend::BruteForce;
    if (backend_ != NeighborBackend::Grid) return;

    const BoundingBox box = bounding_box(reference);
    double volume = 1.0;
    int live_axes = 0;
    double max_extent = 0.0;
    for (int d = 0; d < 3; ++d) {
        const double e = box.max[d] - box.min[d];
        max_extent = std::max(max_extent, e);
        if (e > 0) {
            volume *= e;
            ++live_axes;
        }
    }
    // Aim for roughly two reference points per cell.
    const double n = static_cast<double>(reference.size());
    if (live_axes == 0 || max_extent == 0.0) {
        cell_ = 1.0;
    } else {
        cell_ = std::pow(volume * 2.0 / n, 1.0 / live_axes);
        cell_ = std::max(cell_, max_extent / 256.0);
    }
    origin_ = box.min;
    std::size_t total = 1;
    for (int d = 0; d < 3; ++d) {
        dims_[d] = static_cast<long>(std::floor((box.max[d] - box.min[d]) / cell_)) + 1;
        total *= static_cast<std::size_t>(dims_[d]);
    }

    auto cell_of = [&](const Point3& p) {
        std::size_t id = 0;
        for (int d = 0; d < 3; ++d) {
            long c = static_cast<long>(std::floor((p[d] - origin_[d]) / cell_));
            c = std::clamp(c, 0L, dims_[d] - 1);
            id = id * static_cast<std::size_t>(dims_[d]) + static_cast<std::size_t>(c);
        }
        return id;
    };

    cell_start_.assign(total + 1, 0);
    std::vector<std::size_t> ids(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        ids[i] = cell_of(reference[i]);
        ++cell_start_[ids[i] + 1];
    }
    for (std::size_t c = 0; c < total; ++c) cell_start_[c + 1] += cell_start_[c];
    cell_points_.resize(reference.size());
    std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < reference.size(); ++i) cell_points_[fill[ids[i]]++] = i;
}

Neighbor NearestNeighborIndex::nearest(const Point3& query) const {
    return backend_ == NeighborBackend::Grid ? nearest_grid(query) : nearest_brute(query);
}

Neighbor NearestNeighborIndex::nearest_brute(const Point3& query) const {
    Neighbor best{0, std::numeric_limits<double>::infinity()};
    const auto pts = reference_->points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = squared_distance(query, pts[i]);
        if (d < best.squared_distance) best = {i, d};
    }
    return best;
}

Neighbor NearestNeighborIndex::nearest_grid(const Point3& query) const {
    std::array<long, 3> centre{};
    for (int d = 0; d < 3; ++d) {
        const long c = static_cast<long>(std::floor((query[d] - origin_[d]) / cell_));
        centre[d] = std::clamp(c, 0L, dims_[d] - 1);
    }
    Neighbor best{0, std::numeric_limits<double>::infinity()};
    const auto pts = reference_->points();

    auto visit_cell = [&](long x, long y, long z) {
        const std::size_t id =
            (static_cast<std::size_t>(x) * static_cast<std::size_t>(dims_[1]) + static_cast<std::size_t>(y)) *
                static_cast<std::size_t>(dims_[2]) +
            static_cast<std::size_t>(z);
        for (std::size_t k = cell_start_[id]; k < cell_start_[id + 1]; ++k) {
            const std::size_t i = cell_points_[k];
            const Neighbor cand{i, squared_distance(query, pts[i])};
            if (better(cand, best)) best = cand;
        }
    };

    for (long r = 0;; ++r) {
        const long x0 = std::max(0L, centre[0] - r), x1 = std::min(dims_[0] - 1, centre[0] + r);
        const long y0 = std::max(0L, centre[1] - r), y1 = std::min(dims_[1] - 1, centre[1] + r);
        const long z0 = std::max(0L, centre[2] - r), z1 = std::min(dims_[2] - 1, centre[2] + r);
        for (long x = x0; x <= x1; ++x) {
            const bool x_edge = (x == centre[0] - r || x == centre[0] + r);
            for (long y = y0; y <= y1; ++y) {
                const bool y_edge = (y == centre[1] - r || y == centre[1] + r);
                for (long z = z0; z <= z1; ++z) {
                    const bool z_edge = (z == centre[2] - r || z == centre[2] + r);
                    if (x_edge || y_edge || z_edge) visit_cell(x, y, z);
                }
            }
        }

        bool covers_grid = true;
        double bound = std::numeric_limits<double>::infinity();
        for (int d = 0; d < 3; ++d) {
            if (centre[d] - r > 0 || centre[d] + r < dims_[d] - 1) covers_grid = false;
            const double lo = origin_[d] + static_cast<double>(centre[d] - r) * cell_;
            const double hi = origin_[d] + static_cast<double>(centre[d] + r + 1) * cell_;
            // Unvisited cells lie outside [lo, hi) on at least one axis.
            const double gap = std::min(query[d] - lo, hi - query[d]);
            bound = std::min(bound, std::max(gap, 0.0));
        }
        if (covers_grid) break;
        if (best.squared_distance < bound * bound) break;
    }
    return best;
}

std::vector<Neighbor> nearest_neighbors(const PointCloud& queries, const PointCloud& reference,
                                        NeighborBackend backend) {
    const NearestNeighborIndex index(reference, backend);
    std::vector<Neighbor> out;
    out.reserve(queries.size());
    for (const auto& q : queries) out.push_back(index.nearest(q));
    return out;
}

}  // namespace rladnet
