#include "refiner/replay_buffer.hpp"

#include <cmath>
#include <random>

#include "common/error.hpp"

namespace rladnet {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw InvalidArgument("replay buffer capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
    if (!std::isfinite(t.reward)) throw InvalidArgument("transition reward must be finite");
    if (storage_.size() < capacity_) {
        storage_.push_back(t);
        return;
    }
    storage_[head_] = t;
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= storage_.size()) throw InvalidArgument("replay buffer index out of range");
    return storage_[(head_ + i) % storage_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
    if (batch == 0 || storage_.size() < batch)
        throw InvalidState("replay buffer holds " + std::to_string(storage_.size()) + " transitions, need " +
                           std::to_string(batch));
    std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
    std::vector<std::size_t> idx(batch);
    for (auto& i : idx) i = pick(rng);
    return idx;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
    std::vector<Transition> out;
    out.reserve(batch);
    for (std::size_t i : sample_indices(batch, rng)) out.push_back(storage_[i]);
    return out;
}

}  // namespace rladnet
