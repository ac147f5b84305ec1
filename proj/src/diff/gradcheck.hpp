#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "common/rng.hpp"
#include "diff/network.hpp"

namespace rladnet::diff {

struct GradCheckReport {
    double max_relative_error = 0.0;
    std::size_t checked = 0;

    void merge(const GradCheckReport& o) {
        max_relative_error = std::max(max_relative_error, o.max_relative_error);
        checked += o.checked;
    }
};

struct GradCheckOptions {
    double step = 1e-5;
    // Central differences at h and h/10 that disagree by more than this mean
    // the wider stencil straddles a kink; the probe then moves to h/10.
    double kink_tolerance = 1e-3;
    double min_step = 1e-7;
    // Denominator floor; entries whose gradients are both below this are
    // compared in absolute terms.
    double floor = 1e-6;
    std::size_t samples_per_tensor = 64;
};

inline double relative_error(double analytic, double numeric, double floor) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Central differences of `loss()` with respect to each `*entries[i]`,
// compared against `analytic[i]`. Entries are restored afterwards.
template <class LossFn>
GradCheckReport check_entries(const std::vector<double*>& entries, const std::vector<double>& analytic, LossFn&& loss,
                              const GradCheckOptions& opt) {
    GradCheckReport rep;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        double* x = entries[i];
        const double saved = *x;
        auto central = [&](double h) {
            *x = saved + h;
            const double up = loss();
            *x = saved - h;
            const double down = loss();
            *x = saved;
            return (up - down) / (2.0 * h);
        };
        double h = opt.step;
        double numeric = central(h);
        while (h / 10.0 >= opt.min_step) {
            const double finer = central(h / 10.0);
            if (relative_error(numeric, finer, opt.floor) <= opt.kink_tolerance) break;
            numeric = finer;
            h /= 10.0;
        }
        rep.max_relative_error = std::max(rep.max_relative_error, relative_error(analytic[i], numeric, opt.floor));
        ++rep.checked;
    }
    return rep;
}

// Samples up to opt.samples_per_tensor entries of every weight matrix and bias
// vector of `params` and checks them against `grads`.
template <class LossFn>
GradCheckReport check_parameters(NetworkParams<double>& params, const NetworkParams<double>& grads, LossFn&& loss,
                                 Rng& rng, const GradCheckOptions& opt = {}) {
    params.check_same_shape(grads);
    std::vector<double*> entries;
    std::vector<double> analytic;
    auto pick = [&](double* data, const double* g, Eigen::Index size) {
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(size));
        std::iota(idx.begin(), idx.end(), Eigen::Index{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(std::min(idx.size(), opt.samples_per_tensor));
        for (Eigen::Index i : idx) {
            entries.push_back(data + i);
            analytic.push_back(g[i]);
        }
    };
    auto& layers = params.mutable_layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        pick(layers[l].weight.data(), grads.layers()[l].weight.data(), layers[l].weight.size());
        pick(layers[l].bias.data(), grads.layers()[l].bias.data(), layers[l].bias.size());
    }
    return check_entries(entries, analytic, loss, opt);
}

}  // namespace rladnet::diff
