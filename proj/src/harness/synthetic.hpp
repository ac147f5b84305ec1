#pragma once

#include <cstdint>
#include <string>

#include "geometry/point_cloud.hpp"

namespace rladnet {

enum class ShapeFamily { BoxFrame, WingedCross, MultiSphere };

const char* family_name(ShapeFamily f) noexcept;
ShapeFamily parse_family(const std::string& name);

struct BoxFrameParams {
    double half_x = 0.6, half_y = 0.4, half_z = 0.3;
};

// Fuselage cylinder along x, a wing plate in the x-y plane and a vertical fin.
struct WingedCrossParams {
    double length = 1.6;
    double radius = 0.1;
    double span = 1.4;
    double chord = 0.35;
    double fin_height = 0.35;
};

// Spheres of equal radius with centres evenly spaced on a ring of radius
// `spread` in the x-y plane.
struct MultiSphereParams {
    int count = 3;
    double radius = 0.25;
    double spread = 0.5;
};

struct SyntheticShapeSpec {
    ShapeFamily family = ShapeFamily::BoxFrame;
    BoxFrameParams box;
    WingedCrossParams winged;
    MultiSphereParams spheres;
    std::size_t points = 2048;  // >= 64
    std::uint64_t seed = 0;
};

// Deterministic surface sample of the described shape (not normalised).
PointCloud generate_synthetic(const SyntheticShapeSpec& spec);

// Draws family parameters uniformly around the defaults (shape variation
// within one synthetic category).
SyntheticShapeSpec random_shape_spec(ShapeFamily family, std::size_t points, std::uint64_t seed);

}  // namespace rladnet
