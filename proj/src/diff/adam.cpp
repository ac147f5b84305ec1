#include "diff/adam.hpp"

namespace rladnet::diff {

double scheduled_learning_rate(const AdamConfig& cfg, int epoch) noexcept {
    double lr = cfg.learning_rate;
    for (int m : cfg.milestones)
        if (epoch >= m) lr *= cfg.gamma;
    return lr;
}

}  // namespace rladnet::diff
