#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "common/error.hpp"

namespace rladnet {

inline constexpr std::size_t kGfvDim = 128;

// Global feature vector: the 128-D latent code of a shape.
class Gfv {
public:
    Gfv() { values_.fill(0.0f); }

    static Gfv from_span(std::span<const float> v) {
        if (v.size() != kGfvDim) throw InvalidArgument("GFV must have exactly 128 values");
        Gfv g;
        for (std::size_t i = 0; i < kGfvDim; ++i) {
            if (!std::isfinite(v[i])) throw InvalidArgument("GFV contains a non-finite value");
            g.values_[i] = v[i];
        }
        return g;
    }

    float operator[](std::size_t i) const noexcept { return values_[i]; }
    float& operator[](std::size_t i) noexcept { return values_[i]; }
    std::span<const float, kGfvDim> values() const noexcept { return values_; }
    std::span<float, kGfvDim> values() noexcept { return values_; }
    const float* data() const noexcept { return values_.data(); }

    friend bool operator==(const Gfv&, const Gfv&) = default;

private:
    std::array<float, kGfvDim> values_;
};

}  // namespace rladnet
