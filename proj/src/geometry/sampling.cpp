#include "geometry/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "common/error.hpp"

namespace rladnet {

std::vector<std::size_t> farthest_point_sample(const PointCloud& src, std::size_t m,
                                               std::size_t start_index) {
    const std::size_t n = src.size();
    if (m < 1 || m > n) throw InvalidArgument("farthest_point_sample: m must be in [1, N]");
    if (start_index >= n) throw InvalidArgument("farthest_point_sample: start_index out of range");

    std::vector<std::size_t> selected;
    selected.reserve(m);
    selected.push_back(start_index);
    std::vector<double> min_d(n, std::numeric_limits<double>::infinity());
    std::vector<char> taken(n, 0);
    taken[start_index] = 1;

    std::size_t last = start_index;
    while (selected.size() < m) {
        std::size_t best = n;
        double best_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            min_d[i] = std::min(min_d[i], squared_distance(src[i], src[last]));
            if (min_d[i] > best_d) {
                best_d = min_d[i];
                best = i;
            }
        }
        taken[best] = 1;
        selected.push_back(best);
        last = best;
    }
    return selected;
}

std::vector<std::size_t> knn(const PointCloud& src, const Point3& query, std::size_t k) {
    if (k < 1 || k > src.size()) throw InvalidArgument("knn: k must be in [1, N]");
    std::vector<double> d(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) d[i] = squared_distance(src[i], query);
    std::vector<std::size_t> idx(src.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) { return d[a] < d[b] || (d[a] == d[b] && a < b); };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), less);
    idx.resize(k);
    return idx;
}

Normalization normalize_unit_sphere(const PointCloud& src) {
    const Point3 c = centroid(src);
    double max_d2 = 0.0;
    for (const auto& p : src) max_d2 = std::max(max_d2, squared_distance(p, c));
    const double scale = max_d2 > 0.0 ? std::sqrt(max_d2) : 1.0;

    std::vector<Point3> out;
    out.reserve(src.size());
    for (const auto& p : src) out.push_back({(p[0] - c[0]) / scale, (p[1] - c[1]) / scale, (p[2] - c[2]) / scale});
    return {PointCloud(std::move(out)), c, scale};
}

PointCloud denormalize(const PointCloud& normalized, const Point3& c, double scale) {
    if (!(scale > 0.0)) throw InvalidArgument("denormalize: scale must be positive");
    std::vector<Point3> out;
    out.reserve(normalized.size());
    for (const auto& p : normalized)
        out.push_back({p[0] * scale + c[0], p[1] * scale + c[1], p[2] * scale + c[2]});
    return PointCloud(std::move(out));
}

PointCloud apply_normalization(const PointCloud& cloud, const Point3& c, double scale) {
    if (!(scale > 0.0)) throw InvalidArgument("apply_normalization: scale must be positive");
    std::vector<Point3> out;
    out.reserve(cloud.size());
    for (const auto& p : cloud)
        out.push_back({(p[0] - c[0]) / scale, (p[1] - c[1]) / scale, (p[2] - c[2]) / scale});
    return PointCloud(std::move(out));
}

}  // namespace rladnet
