#pragma once

#include <string>
#include <vector>

#include "common/error.hpp"
#include "diff/network.hpp"

namespace rladnet::diff {

// Intermediates of one forward pass: the input and the post-activation output
// of every layer, for a batch of row vectors.
template <class Scalar>
struct Tape {
    const NetworkParams<Scalar>* params = nullptr;
    std::uint64_t generation = 0;
    std::vector<Matrix<Scalar>> inputs;
    std::vector<Matrix<Scalar>> outputs;
};

template <class Scalar>
struct MlpGradients {
    NetworkParams<Scalar> params;
    Matrix<Scalar> input;
};

template <class Scalar>
void apply_activation(Matrix<Scalar>& z, Activation a) {
    switch (a) {
        case Activation::None: break;
        case Activation::Relu: z = z.cwiseMax(Scalar(0)); break;
        case Activation::Tanh: z = z.array().tanh().matrix(); break;
    }
}

// Forward pass over a batch (rows = samples). Pass a tape to enable backward.
template <class Scalar>
Matrix<Scalar> mlp_forward(const NetworkParams<Scalar>& params, const Matrix<Scalar>& input,
                           Tape<Scalar>* tape = nullptr) {
    if (params.depth() == 0) throw InvalidArgument("mlp_forward: network has no layers");
    if (static_cast<std::size_t>(input.cols()) != params.input_dim())
        throw InvalidArgument("mlp_forward: input width " + std::to_string(input.cols()) +
                              " does not match network input " + std::to_string(params.input_dim()));
    if (tape) {
        tape->params = &params;
        tape->generation = params.generation();
        tape->inputs.clear();
        tape->outputs.clear();
    }
    Matrix<Scalar> x = input;
    for (const auto& layer : params.layers()) {
        Matrix<Scalar> z = x * layer.weight;
        z.rowwise() += layer.bias;
        apply_activation(z, layer.activation);
        if (tape) {
            tape->inputs.push_back(std::move(x));
            tape->outputs.push_back(z);
        }
        x = std::move(z);
    }
    return x;
}

// Reverse pass. Parameter gradients are *added* into `grads`; the gradient
// with respect to the input batch is returned.
template <class Scalar>
Matrix<Scalar> mlp_backward_into(const NetworkParams<Scalar>& params, const Tape<Scalar>& tape,
                                 const Matrix<Scalar>& output_grad, NetworkParams<Scalar>& grads) {
    if (tape.params != &params || tape.generation != params.generation())
        throw ContractViolation("mlp_backward: tape does not belong to the current parameters");
    if (tape.outputs.size() != params.depth())
        throw ContractViolation("mlp_backward: tape depth mismatch");
    const auto& last = tape.outputs.back();
    if (output_grad.rows() != last.rows() || output_grad.cols() != last.cols())
        throw InvalidArgument("mlp_backward: upstream gradient shape mismatch");
    grads.check_same_shape(params);

    auto& gl = grads.mutable_layers();
    Matrix<Scalar> g = output_grad;
    for (std::size_t i = params.depth(); i-- > 0;) {
        const auto& layer = params.layers()[i];
        const auto& y = tape.outputs[i];
        switch (layer.activation) {
            case Activation::None: break;
            case Activation::Relu: g = g.cwiseProduct((y.array() > Scalar(0)).template cast<Scalar>().matrix()); break;
            case Activation::Tanh: g = g.cwiseProduct((Scalar(1) - y.array().square()).matrix()); break;
        }
        gl[i].weight.noalias() += tape.inputs[i].transpose() * g;
        gl[i].bias += g.colwise().sum();
        Matrix<Scalar> next = g * layer.weight.transpose();
        g = std::move(next);
    }
    return g;
}

template <class Scalar>
MlpGradients<Scalar> mlp_backward(const NetworkParams<Scalar>& params, const Tape<Scalar>& tape,
                                  const Matrix<Scalar>& output_grad) {
    MlpGradients<Scalar> out{params.zeros_like(), {}};
    out.input = mlp_backward_into(params, tape, output_grad, out.params);
    return out;
}

}  // namespace rladnet::diff
