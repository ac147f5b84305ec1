#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rladnet {

using Point3 = std::array<double, 3>;

inline double squared_distance(const Point3& a, const Point3& b) noexcept {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

// Ordered, non-empty set of finite 3-D points in model units.
class PointCloud {
public:
    // Throws InvalidArgument when empty or when any coordinate is NaN/Inf.
    explicit PointCloud(std::vector<Point3> points);

    std::size_t size() const noexcept { return points_.size(); }
    const Point3& operator[](std::size_t i) const noexcept { return points_[i]; }
    std::span<const Point3> points() const noexcept { return points_; }

    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

    // Flat x0 y0 z0 x1 ... copy.
    std::vector<double> flatten() const;
    static PointCloud from_flat(std::span<const double> xyz);

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::vector<Point3> points_;
};

struct BoundingBox {
    Point3 min;
    Point3 max;
    double diagonal() const noexcept;
};

BoundingBox bounding_box(const PointCloud& cloud) noexcept;
Point3 centroid(const PointCloud& cloud) noexcept;

// Gathers `indices` (in order) into a new cloud.
PointCloud gather(const PointCloud& cloud, std::span<const std::size_t> indices);

}  // namespace rladnet
