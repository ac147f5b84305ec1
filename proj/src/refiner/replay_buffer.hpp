#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "autoencoder/gfv.hpp"
#include "common/rng.hpp"

namespace rladnet {

struct Transition {
    Gfv state;
    std::array<float, kGfvDim> action{};
    double reward = 0.0;
    Gfv next_state;
    bool done = true;
};

// FIFO ring of transitions; sampling is uniform with replacement.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 100000);

    void push(const Transition& t);
    // Throws InvalidState when fewer than `batch` transitions are stored.
    std::vector<Transition> sample(std::size_t batch, Rng& rng) const;
    std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

    std::size_t size() const noexcept { return storage_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    // i-th oldest stored transition.
    const Transition& at(std::size_t i) const;

private:
    std::size_t capacity_;
    std::vector<Transition> storage_;
    std::size_t head_ = 0;  // next slot to overwrite once full
};

}  // namespace rladnet
