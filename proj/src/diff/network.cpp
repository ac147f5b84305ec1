#include "diff/network.hpp"

namespace rladnet::diff {

const char* activation_name(Activation a) noexcept {
    switch (a) {
        case Activation::None: return "none";
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
    }
    return "?";
}

std::vector<LayerSpec> chain(std::span<const std::size_t> widths, Activation hidden, Activation last) {
    if (widths.size() < 2) throw InvalidArgument("a layer chain needs at least two widths");
    std::vector<LayerSpec> specs;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i)
        specs.push_back({widths[i], widths[i + 1], i + 2 == widths.size() ? last : hidden});
    return specs;
}

}  // namespace rladnet::diff
