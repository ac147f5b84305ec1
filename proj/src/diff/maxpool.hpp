#pragma once

#include <vector>

#include "common/error.hpp"
#include "diff/tensor.hpp"

namespace rladnet::diff {

template <class Scalar>
struct MaxPoolResult {
    RowVector<Scalar> pooled;
    std::vector<Eigen::Index> argmax;  // per column, lowest row on ties
};

template <class Scalar>
MaxPoolResult<Scalar> maxpool_points(const Matrix<Scalar>& features) {
    if (features.rows() < 1) throw InvalidArgument("maxpool_points: empty feature set");
    MaxPoolResult<Scalar> r;
    r.pooled = features.row(0);
    r.argmax.assign(static_cast<std::size_t>(features.cols()), 0);
    for (Eigen::Index p = 1; p < features.rows(); ++p) {
        for (Eigen::Index d = 0; d < features.cols(); ++d) {
            if (features(p, d) > r.pooled(d)) {
                r.pooled(d) = features(p, d);
                r.argmax[static_cast<std::size_t>(d)] = p;
            }
        }
    }
    return r;
}

// Routes each pooled-dimension gradient to its argmax row.
template <class Scalar>
Matrix<Scalar> maxpool_backward(const MaxPoolResult<Scalar>& pool, const RowVector<Scalar>& upstream,
                                Eigen::Index rows) {
    if (upstream.size() != static_cast<Eigen::Index>(pool.argmax.size()))
        throw InvalidArgument("maxpool_backward: upstream width mismatch");
    Matrix<Scalar> g = Matrix<Scalar>::Zero(rows, upstream.size());
    for (Eigen::Index d = 0; d < upstream.size(); ++d) g(pool.argmax[static_cast<std::size_t>(d)], d) += upstream(d);
    return g;
}

}  // namespace rladnet::diff
