#include "geometry/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.hpp"

namespace rladnet {

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
    if (points_.empty()) throw InvalidArgument("point cloud must contain at least one point");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (double c : points_[i]) {
            if (!std::isfinite(c))
                throw InvalidArgument("non-finite coordinate at point " + std::to_string(i));
        }
    }
}

std::vector<double> PointCloud::flatten() const {
    std::vector<double> out;
    out.reserve(points_.size() * 3);
    for (const auto& p : points_) out.insert(out.end(), p.begin(), p.end());
    return out;
}

PointCloud PointCloud::from_flat(std::span<const double> xyz) {
    if (xyz.size() % 3 != 0) throw InvalidArgument("flat coordinate count is not a multiple of 3");
    std::vector<Point3> pts(xyz.size() / 3);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
    return PointCloud(std::move(pts));
}

double BoundingBox::diagonal() const noexcept {
    return std::sqrt(squared_distance(min, max));
}

BoundingBox bounding_box(const PointCloud& cloud) noexcept {
    BoundingBox box{cloud[0], cloud[0]};
    for (const auto& p : cloud) {
        for (int d = 0; d < 3; ++d) {
            box.min[d] = std::min(box.min[d], p[d]);
            box.max[d] = std::max(box.max[d], p[d]);
        }
    }
    return box;
}

Point3 centroid(const PointCloud& cloud) noexcept {
    Point3 c{0.0, 0.0, 0.0};
    for (const auto& p : cloud) {
        c[0] += p[0];
        c[1] += p[1];
        c[2] += p[2];
    }
    const double n = static_cast<double>(cloud.size());
    return {c[0] / n, c[1] / n, c[2] / n};
}

PointCloud gather(const PointCloud& cloud, std::span<const std::size_t> indices) {
    std::vector<Point3> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= cloud.size()) throw InvalidArgument("gather index out of range");
        out.push_back(cloud[i]);
    }
    return PointCloud(std::move(out));
}

}  // namespace rladnet
