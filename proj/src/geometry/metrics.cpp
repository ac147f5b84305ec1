#include "geometry/metrics.hpp"

#include <cmath>

#include "common/error.hpp"

namespace rladnet {
namespace {

double mean_sq(const std::vector<Neighbor>& nn) {
    double s = 0.0;
    for (const auto& n : nn) s += n.squared_distance;
    return s / static_cast<double>(nn.size());
}

}  // namespace

double chamfer_l2(const PointCloud& a, const PointCloud& b, NeighborBackend backend) {
    return mean_sq(nearest_neighbors(a, b, backend)) + mean_sq(nearest_neighbors(b, a, backend));
}

double harmonic_fscore(double precision, double recall) noexcept {
    const double s = precision + recall;
    return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

MetricReport fscore(const PointCloud& pred, const PointCloud& gt, double tau_fraction,
                    NeighborBackend backend) {
    if (!(tau_fraction > 0.0) || !std::isfinite(tau_fraction))
        throw InvalidArgument("tau_fraction must be a positive finite number");
    const double diag = bounding_box(gt).diagonal();
    if (diag == 0.0)
        throw DegenerateGeometry("ground-truth cloud has a zero bounding-box diagonal");

    MetricReport r;
    r.tau = tau_fraction * diag;
    const double tau2 = r.tau * r.tau;

    const auto forward = nearest_neighbors(pred, gt, backend);
    const auto backward = nearest_neighbors(gt, pred, backend);
    std::size_t hit_p = 0, hit_r = 0;
    for (const auto& n : forward) hit_p += n.squared_distance <= tau2;
    for (const auto& n : backward) hit_r += n.squared_distance <= tau2;

    r.precision = static_cast<double>(hit_p) / static_cast<double>(pred.size());
    r.recall = static_cast<double>(hit_r) / static_cast<double>(gt.size());
    r.fscore = harmonic_fscore(r.precision, r.recall);
    r.cd_l2 = mean_sq(forward) + mean_sq(backward);
    return r;
}

}  // namespace rladnet
