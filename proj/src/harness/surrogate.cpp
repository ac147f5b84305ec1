#include "harness/surrogate.hpp"

#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace rladnet {

PointCloud surrogate_complete(const PointCloud& partial, std::size_t target_size, std::uint64_t seed,
                              double jitter_fraction) {
    if (target_size < 1) throw InvalidArgument("surrogate_complete: target size must be positive");
    const Point3 c = centroid(partial);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : partial) {
        const Eigen::Vector3d d(p[0] - c[0], p[1] - c[1], p[2] - c[2]);
        cov += d * d.transpose();
    }
    // Eigenvalues come back in increasing order; column 0 is the normal.
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Eigen::Vector3d normal = eig.eigenvectors().col(0);
    // Fix the sign so the result does not depend on the solver's choice.
    int big = 0;
    normal.cwiseAbs().maxCoeff(&big);
    if (normal(big) < 0) normal = -normal;

    std::vector<Point3> pool(partial.begin(), partial.end());
    for (const auto& p : partial) {
        const Eigen::Vector3d v(p[0] - c[0], p[1] - c[1], p[2] - c[2]);
        const Eigen::Vector3d m = v - 2.0 * v.dot(normal) * normal;
        pool.push_back({m(0) + c[0], m(1) + c[1], m(2) + c[2]});
    }

    const double sigma = jitter_fraction * bounding_box(partial).diagonal();
    Rng rng = make_stream(seed, "surrogate/resample");
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::normal_distribution<double> jitter(0.0, sigma > 0.0 ? sigma : 1e-12);
    std::vector<Point3> out(target_size);
    for (auto& p : out) {
        const Point3& s = pool[pick(rng)];
        p = {s[0] + jitter(rng), s[1] + jitter(rng), s[2] + jitter(rng)};
    }
    return PointCloud(std::move(out));
}

}  // namespace rladnet
