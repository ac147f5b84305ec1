#include "refiner/networks.hpp"

namespace rladnet {

std::vector<diff::LayerSpec> actor_specs(std::size_t state_dim, std::size_t action_dim,
                                         const std::vector<std::size_t>& hidden) {
    std::vector<std::size_t> w{state_dim};
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(action_dim);
    return diff::chain(w, diff::Activation::Relu, diff::Activation::Tanh);
}

std::vector<diff::LayerSpec> critic_specs(std::size_t state_dim, std::size_t action_dim,
                                          const std::vector<std::size_t>& hidden) {
    std::vector<std::size_t> w{state_dim + action_dim};
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(1);
    return diff::chain(w, diff::Activation::Relu, diff::Activation::None);
}

}  // namespace rladnet
