#pragma once

#include <limits>

#include "common/error.hpp"
#include "diff/tensor.hpp"

namespace rladnet::diff {

template <class Scalar>
struct ChamferLoss {
    double loss = 0.0;
    Matrix<Scalar> grad;  // d loss / d pred, same shape as pred
};

namespace detail {
// Nearest row of `ref` for every row of `q` (lowest index on ties).
template <class Scalar>
void nearest_rows(const Matrix<Scalar>& q, const Matrix<Scalar>& ref, std::vector<Eigen::Index>& idx,
                  std::vector<double>& d2) {
    idx.assign(static_cast<std::size_t>(q.rows()), 0);
    d2.assign(static_cast<std::size_t>(q.rows()), std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        const double qx = q(i, 0), qy = q(i, 1), qz = q(i, 2);
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index arg = 0;
        for (Eigen::Index j = 0; j < ref.rows(); ++j) {
            const double dx = qx - static_cast<double>(ref(j, 0));
            const double dy = qy - static_cast<double>(ref(j, 1));
            const double dz = qz - static_cast<double>(ref(j, 2));
            const double d = dx * dx + dy * dy + dz * dz;
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        idx[static_cast<std::size_t>(i)] = arg;
        d2[static_cast<std::size_t>(i)] = best;
    }
}
}  // namespace detail

// Chamfer-L2 (sum of both directional means of squared NN distances) and its
// gradient with nearest-neighbour assignments held fixed.
template <class Scalar>
ChamferLoss<Scalar> chamfer_loss_grad(const Matrix<Scalar>& pred, const Matrix<Scalar>& target) {
    if (pred.rows() < 1 || target.rows() < 1) throw InvalidArgument("chamfer_loss_grad: empty cloud");
    if (pred.cols() != 3 || target.cols() != 3) throw InvalidArgument("chamfer_loss_grad: clouds must be N x 3");

    std::vector<Eigen::Index> fwd_idx, bwd_idx;
    std::vector<double> fwd_d2, bwd_d2;
    detail::nearest_rows(pred, target, fwd_idx, fwd_d2);
    detail::nearest_rows(target, pred, bwd_idx, bwd_d2);

    const double np = static_cast<double>(pred.rows());
    const double nt = static_cast<double>(target.rows());
    double sp = 0.0, st = 0.0;
    for (double d : fwd_d2) sp += d;
    for (double d : bwd_d2) st += d;

    ChamferLoss<Scalar> out;
    out.loss = sp / np + st / nt;
    out.grad = Matrix<Scalar>::Zero(pred.rows(), 3);
    const Scalar cp = static_cast<Scalar>(2.0 / np);
    const Scalar ct = static_cast<Scalar>(2.0 / nt);
    for (Eigen::Index i = 0; i < pred.rows(); ++i)
        out.grad.row(i) += cp * (pred.row(i) - target.row(fwd_idx[static_cast<std::size_t>(i)]));
    for (Eigen::Index j = 0; j < target.rows(); ++j) {
        const Eigen::Index p = bwd_idx[static_cast<std::size_t>(j)];
        out.grad.row(p) += ct * (pred.row(p) - target.row(j));
    }
    return out;
}

}  // namespace rladnet::diff
