#include "geometry/crop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace rladnet {
namespace {

void check_args(const PointCloud& src, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("crop ratio must lie in (0, 1)");
    if (src.size() < 2) throw InvalidArgument("crop requires at least two points");
}

// Drops the `k` first entries of `order` from `src`.
CropResult remove_first(const PointCloud& src, std::vector<std::size_t> order, std::size_t k,
                        const Point3& anchor) {
    std::vector<std::size_t> removed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(removed.begin(), removed.end());
    std::vector<char> gone(src.size(), 0);
    for (std::size_t i : removed) gone[i] = 1;
    std::vector<Point3> kept;
    kept.reserve(src.size() - k);
    for (std::size_t i = 0; i < src.size(); ++i)
        if (!gone[i]) kept.push_back(src[i]);
    return {PointCloud(std::move(kept)), std::move(removed), anchor};
}

std::vector<std::size_t> rank_by_distance(const PointCloud& src, const Point3& anchor,
                                          std::size_t pinned_first) {
    std::vector<double> d(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) d[i] = squared_distance(src[i], anchor);
    std::vector<std::size_t> order(src.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (d[a] != d[b]) return d[a] < d[b];
        if ((a == pinned_first) != (b == pinned_first)) return a == pinned_first;
        return a < b;
    });
    return order;
}

}  // namespace

std::size_t removal_count(double ratio, std::size_t n) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

CropResult crop_spherical(const PointCloud& src, double ratio, std::uint64_t rng_seed) {
    check_args(src, ratio);
    Rng rng = make_stream(rng_seed, "crop/spherical");
    std::normal_distribution<double> normal(0.0, 1.0);
    Point3 c{};
    double norm = 0.0;
    do {
        c = {normal(rng), normal(rng), normal(rng)};
        norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    } while (norm < 1e-12);
    c = {c[0] / norm, c[1] / norm, c[2] / norm};

    const std::size_t k = removal_count(ratio, src.size());
    return remove_first(src, rank_by_distance(src, c, src.size()), k, c);
}

CropResult crop_seed_proximity(const PointCloud& src, double deletion_ratio, std::uint64_t rng_seed) {
    check_args(src, deletion_ratio);
    Rng rng = make_stream(rng_seed, "crop/seed-proximity");
    std::uniform_int_distribution<std::size_t> pick(0, src.size() - 1);
    const std::size_t seed = pick(rng);

    const std::size_t k = removal_count(deletion_ratio, src.size());
    return remove_first(src, rank_by_distance(src, src[seed], seed), k, src[seed]);
}

CropResult crop(const PointCloud& src, CropMode mode, double ratio, std::uint64_t rng_seed) {
    return mode == CropMode::Spherical ? crop_spherical(src, ratio, rng_seed)
                                       : crop_seed_proximity(src, ratio, rng_seed);
}

}  // namespace rladnet
