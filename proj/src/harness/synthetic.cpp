#include "harness/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace rladnet {
namespace {

using Sampler = std::uniform_real_distribution<double>;

// Picks a part with probability proportional to its weight.
std::size_t pick_part(const std::vector<double>& weights, Rng& rng) {
    std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
    return d(rng);
}

PointCloud box_frame(const BoxFrameParams& p, std::size_t n, Rng& rng) {
    const double hx = p.half_x, hy = p.half_y, hz = p.half_z;
    // 4 edges along each axis.
    std::vector<double> w{4 * hx, 4 * hy, 4 * hz};
    Sampler u(-1.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t axis = pick_part(w, rng);
        const double s1 = coin(rng) ? 1.0 : -1.0, s2 = coin(rng) ? 1.0 : -1.0;
        const double t = u(rng);
        if (axis == 0) pts.push_back({t * hx, s1 * hy, s2 * hz});
        else if (axis == 1) pts.push_back({s1 * hx, t * hy, s2 * hz});
        else pts.push_back({s1 * hx, s2 * hy, t * hz});
    }
    return PointCloud(std::move(pts));
}

PointCloud winged_cross(const WingedCrossParams& p, std::size_t n, Rng& rng) {
    const double fuselage_area = 2.0 * std::numbers::pi * p.radius * p.length;
    const double wing_area = 2.0 * p.span * p.chord;
    const double fin_area = p.fin_height * p.chord * 0.8;
    std::vector<double> w{fuselage_area, wing_area, fin_area};
    Sampler u01(0.0, 1.0);
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (pick_part(w, rng)) {
            case 0: {
                const double x = (u01(rng) - 0.5) * p.length;
                const double a = u01(rng) * 2.0 * std::numbers::pi;
                pts.push_back({x, p.radius * std::cos(a), p.radius * std::sin(a)});
                break;
            }
            case 1: {
                const double x = (u01(rng) - 0.5) * p.chord;
                const double y = (u01(rng) * 2.0 - 1.0) * p.span;
                pts.push_back({x, y, 0.0});
                break;
            }
            default: {
                const double x = -0.5 * p.length + u01(rng) * p.chord * 0.8;
                const double z = p.radius + u01(rng) * p.fin_height;
                pts.push_back({x, 0.0, z});
                break;
            }
        }
    }
    return PointCloud(std::move(pts));
}

PointCloud multi_sphere(const MultiSphereParams& p, std::size_t n, Rng& rng) {
    if (p.count < 1) throw InvalidArgument("multi-sphere needs at least one sphere");
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> which(0, p.count - 1);
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int s = which(rng);
        const double ang = 2.0 * std::numbers::pi * s / p.count;
        const Point3 c{p.spread * std::cos(ang), p.spread * std::sin(ang), 0.0};
        double v[3], norm = 0.0;
        do {
            for (double& x : v) x = g(rng);
            norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        } while (norm < 1e-12);
        pts.push_back({c[0] + p.radius * v[0] / norm, c[1] + p.radius * v[1] / norm, c[2] + p.radius * v[2] / norm});
    }
    return PointCloud(std::move(pts));
}

}  // namespace

const char* family_name(ShapeFamily f) noexcept {
    switch (f) {
        case ShapeFamily::BoxFrame: return "box-frame";
        case ShapeFamily::WingedCross: return "winged-cross";
        case ShapeFamily::MultiSphere: return "multi-sphere";
    }
    return "?";
}

ShapeFamily parse_family(const std::string& name) {
    if (name == "box-frame") return ShapeFamily::BoxFrame;
    if (name == "winged-cross") return ShapeFamily::WingedCross;
    if (name == "multi-sphere") return ShapeFamily::MultiSphere;
    throw InvalidArgument("unknown shape family '" + name + "'");
}

PointCloud generate_synthetic(const SyntheticShapeSpec& spec) {
    if (spec.points < 64) throw InvalidArgument("synthetic shapes need at least 64 points");
    Rng rng = make_stream(spec.seed, "synthetic/surface");
    switch (spec.family) {
        case ShapeFamily::BoxFrame: return box_frame(spec.box, spec.points, rng);
        case ShapeFamily::WingedCross: return winged_cross(spec.winged, spec.points, rng);
        case ShapeFamily::MultiSphere: return multi_sphere(spec.spheres, spec.points, rng);
    }
    throw InvalidArgument("unknown shape family");
}

SyntheticShapeSpec random_shape_spec(ShapeFamily family, std::size_t points, std::uint64_t seed) {
    Rng rng = make_stream(seed, "synthetic/params");
    Sampler f(0.75, 1.25);
    SyntheticShapeSpec s;
    s.family = family;
    s.points = points;
    s.seed = seed;
    s.box = {0.6 * f(rng), 0.4 * f(rng), 0.3 * f(rng)};
    s.winged = {1.6 * f(rng), 0.1 * f(rng), 1.4 * f(rng), 0.35 * f(rng), 0.35 * f(rng)};
    std::uniform_int_distribution<int> count(2, 4);
    s.spheres = {count(rng), 0.25 * f(rng), 0.5 * f(rng)};
    return s;
}

}  // namespace rladnet
