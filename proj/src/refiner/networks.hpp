#pragma once

#include <vector>

#include "diff/mlp.hpp"

namespace rladnet {

// Actor: state -> hidden... -> action, tanh output scaled by the action bound.
// Critic: [state, action] -> hidden... -> scalar Q.
std::vector<diff::LayerSpec> actor_specs(std::size_t state_dim, std::size_t action_dim,
                                         const std::vector<std::size_t>& hidden);
std::vector<diff::LayerSpec> critic_specs(std::size_t state_dim, std::size_t action_dim,
                                          const std::vector<std::size_t>& hidden);

template <class Scalar>
diff::Matrix<Scalar> actor_forward(const diff::NetworkParams<Scalar>& actor, const diff::Matrix<Scalar>& states,
                                   double action_bound, diff::Tape<Scalar>* tape = nullptr) {
    return diff::mlp_forward(actor, states, tape) * static_cast<Scalar>(action_bound);
}

template <class Scalar>
diff::Matrix<Scalar> concat_columns(const diff::Matrix<Scalar>& a, const diff::Matrix<Scalar>& b) {
    diff::Matrix<Scalar> out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

// Mean squared TD error of `critic` on (states, actions) against `targets`
// (column of B values). Parameter gradients are added into `grads`.
template <class Scalar>
double critic_loss_grad(const diff::NetworkParams<Scalar>& critic, const diff::Matrix<Scalar>& states,
                        const diff::Matrix<Scalar>& actions, const diff::Matrix<Scalar>& targets,
                        diff::NetworkParams<Scalar>& grads) {
    diff::Tape<Scalar> tape;
    const auto q = diff::mlp_forward(critic, concat_columns(states, actions), &tape);
    const diff::Matrix<Scalar> err = q - targets;
    const double b = static_cast<double>(q.rows());
    const diff::Matrix<Scalar> dq = err * static_cast<Scalar>(2.0 / b);
    diff::mlp_backward_into(critic, tape, dq, grads);
    return static_cast<double>(err.squaredNorm()) / b;
}

// Deterministic policy-gradient objective: -mean Q(s, actor(s)). Gradients
// flow through the critic into the actor only; actor gradients are added into
// `actor_grads`.
template <class Scalar>
double actor_loss_grad(const diff::NetworkParams<Scalar>& actor, const diff::NetworkParams<Scalar>& critic,
                       const diff::Matrix<Scalar>& states, double action_bound,
                       diff::NetworkParams<Scalar>& actor_grads) {
    diff::Tape<Scalar> actor_tape, critic_tape;
    const auto actions = actor_forward(actor, states, action_bound, &actor_tape);
    const auto q = diff::mlp_forward(critic, concat_columns(states, actions), &critic_tape);
    const double b = static_cast<double>(q.rows());
    const diff::Matrix<Scalar> dq = diff::Matrix<Scalar>::Constant(q.rows(), 1, static_cast<Scalar>(-1.0 / b));
    auto scratch = critic.zeros_like();
    const auto d_in = diff::mlp_backward_into(critic, critic_tape, dq, scratch);
    const diff::Matrix<Scalar> d_action =
        d_in.rightCols(actions.cols()) * static_cast<Scalar>(action_bound);
    diff::mlp_backward_into(actor, actor_tape, d_action, actor_grads);
    return -static_cast<double>(q.sum()) / b;
}

}  // namespace rladnet
