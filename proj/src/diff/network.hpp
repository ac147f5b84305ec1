#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "diff/tensor.hpp"

namespace rladnet::diff {

enum class Activation : std::uint8_t { None = 0, Relu = 1, Tanh = 2 };

const char* activation_name(Activation a) noexcept;

struct LayerSpec {
    std::size_t in = 0;
    std::size_t out = 0;
    Activation activation = Activation::None;
    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Builds the layer chain widths[0] -> widths[1] -> ... ; every layer uses
// `hidden` except the last, which uses `last`.
std::vector<LayerSpec> chain(std::span<const std::size_t> widths, Activation hidden, Activation last);

namespace detail {
inline std::uint64_t next_generation() noexcept {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}
}  // namespace detail

// weight is in x out (y = x W + b on row-vector inputs), so the column count of
// layer i equals the row count of layer i+1.
template <class Scalar>
struct Layer {
    Matrix<Scalar> weight;
    RowVector<Scalar> bias;
    Activation activation = Activation::None;

    LayerSpec spec() const {
        return {static_cast<std::size_t>(weight.rows()), static_cast<std::size_t>(weight.cols()), activation};
    }
};

// Parameters of a fully-connected stack. Also used as the gradient buffer of
// the same shape. Every mutation through mutable_layers() bumps the
// generation, which invalidates outstanding tapes.
template <class Scalar>
class NetworkParams {
public:
    NetworkParams() = default;

    explicit NetworkParams(std::span<const LayerSpec> specs) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (i > 0 && specs[i].in != specs[i - 1].out)
                throw InvalidArgument("layer " + std::to_string(i) + " input width does not chain");
            Layer<Scalar> l;
            l.weight = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(specs[i].in),
                                            static_cast<Eigen::Index>(specs[i].out));
            l.bias = RowVector<Scalar>::Zero(static_cast<Eigen::Index>(specs[i].out));
            l.activation = specs[i].activation;
            layers_.push_back(std::move(l));
        }
    }

    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
    static NetworkParams initialized(std::span<const LayerSpec> specs, Rng& rng) {
        NetworkParams p(specs);
        for (auto& l : p.layers_) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(l.weight.rows()));
            std::uniform_real_distribution<double> u(-bound, bound);
            for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = static_cast<Scalar>(u(rng));
            for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias.data()[i] = static_cast<Scalar>(u(rng));
        }
        return p;
    }

    NetworkParams zeros_like() const { return NetworkParams(specs()); }

    template <class Other>
    NetworkParams<Other> cast() const {
        NetworkParams<Other> out(specs());
        auto& ol = out.mutable_layers();
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            ol[i].weight = layers_[i].weight.template cast<Other>();
            ol[i].bias = layers_[i].bias.template cast<Other>();
        }
        return out;
    }

    std::vector<LayerSpec> specs() const {
        std::vector<LayerSpec> s;
        for (const auto& l : layers_) s.push_back(l.spec());
        return s;
    }

    const std::vector<Layer<Scalar>>& layers() const noexcept { return layers_; }
    std::vector<Layer<Scalar>>& mutable_layers() noexcept {
        generation_ = detail::next_generation();
        return layers_;
    }

    std::size_t depth() const noexcept { return layers_.size(); }
    std::size_t input_dim() const noexcept { return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().weight.rows()); }
    std::size_t output_dim() const noexcept { return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.back().weight.cols()); }

    std::size_t parameter_count() const noexcept {
        std::size_t n = 0;
        for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
        return n;
    }

    std::uint64_t generation() const noexcept { return generation_; }

    bool all_finite() const {
        for (const auto& l : layers_)
            if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
        return true;
    }

    void set_zero() {
        for (auto& l : mutable_layers()) {
            l.weight.setZero();
            l.bias.setZero();
        }
    }

    // this += other (shapes must agree).
    void accumulate(const NetworkParams& other) {
        check_same_shape(other);
        auto& ls = mutable_layers();
        for (std::size_t i = 0; i < ls.size(); ++i) {
            ls[i].weight += other.layers_[i].weight;
            ls[i].bias += other.layers_[i].bias;
        }
    }

    void scale(Scalar s) {
        for (auto& l : mutable_layers()) {
            l.weight *= s;
            l.bias *= s;
        }
    }

    void check_same_shape(const NetworkParams& other) const {
        if (other.layers_.size() != layers_.size())
            throw InvalidArgument("parameter sets have different depths");
        for (std::size_t i = 0; i < layers_.size(); ++i)
            if (other.layers_[i].weight.rows() != layers_[i].weight.rows() ||
                other.layers_[i].weight.cols() != layers_[i].weight.cols())
                throw InvalidArgument("parameter sets differ in shape at layer " + std::to_string(i));
    }

    // Visits every scalar parameter in a fixed order: layer by layer, weights
    // row-major then biases.
    template <class Fn>
    void for_each_scalar(Fn&& fn) const {
        for (const auto& l : layers_) {
            for (Eigen::Index i = 0; i < l.weight.size(); ++i) fn(l.weight.data()[i]);
            for (Eigen::Index i = 0; i < l.bias.size(); ++i) fn(l.bias.data()[i]);
        }
    }

private:
    std::vector<Layer<Scalar>> layers_;
    std::uint64_t generation_ = detail::next_generation();
};

// Polyak averaging: target <- tau * online + (1 - tau) * target.
template <class Scalar>
void soft_update(NetworkParams<Scalar>& target, const NetworkParams<Scalar>& online, double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw InvalidArgument("soft update tau must be in (0, 1]");
    target.check_same_shape(online);
    const Scalar t = static_cast<Scalar>(tau);
    const Scalar keep = static_cast<Scalar>(1.0 - tau);
    auto& tl = target.mutable_layers();
    for (std::size_t i = 0; i < tl.size(); ++i) {
        tl[i].weight = t * online.layers()[i].weight + keep * tl[i].weight;
        tl[i].bias = t * online.layers()[i].bias + keep * tl[i].bias;
    }
}

}  // namespace rladnet::diff
