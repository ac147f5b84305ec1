#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "autoencoder/gfv.hpp"
#include "diff/adam.hpp"
#include "diff/chamfer_loss.hpp"
#include "diff/maxpool.hpp"
#include "diff/mlp.hpp"
#include "geometry/point_cloud.hpp"

namespace rladnet {

// PointNet-style encoder (shared per-point MLP, max-pool, post-pool MLP) and a
// fully-connected decoder emitting `output_points` xyz triples.
struct AEArchitecture {
    std::vector<std::size_t> point_widths{3, 64, 128, 256};
    std::vector<std::size_t> head_widths{256, 128};
    std::vector<std::size_t> decoder_hidden{256, 512};
    std::size_t output_points = 2048;

    void validate() const;
    std::vector<diff::LayerSpec> point_specs() const;
    std::vector<diff::LayerSpec> head_specs() const;
    std::vector<diff::LayerSpec> decoder_specs() const;
    friend bool operator==(const AEArchitecture&, const AEArchitecture&) = default;
};

template <class Scalar>
struct BasicAEModel {
    AEArchitecture arch;
    diff::NetworkParams<Scalar> point_mlp;
    diff::NetworkParams<Scalar> head;
    diff::NetworkParams<Scalar> decoder;
    // Set once training finishes; refinement only ever reads the decoder.
    bool decoder_frozen = false;

    static BasicAEModel initialized(const AEArchitecture& arch, std::uint64_t seed) {
        arch.validate();
        Rng rng = make_stream(seed, "ae/init");
        BasicAEModel m;
        m.arch = arch;
        const auto ps = arch.point_specs(), hs = arch.head_specs(), ds = arch.decoder_specs();
        m.point_mlp = diff::NetworkParams<Scalar>::initialized(ps, rng);
        m.head = diff::NetworkParams<Scalar>::initialized(hs, rng);
        m.decoder = diff::NetworkParams<Scalar>::initialized(ds, rng);
        return m;
    }

    template <class Other>
    BasicAEModel<Other> cast() const {
        return {arch, point_mlp.template cast<Other>(), head.template cast<Other>(), decoder.template cast<Other>(),
                decoder_frozen};
    }
};

using AEModel = BasicAEModel<float>;

template <class Scalar>
diff::Matrix<Scalar> to_matrix(const PointCloud& cloud) {
    diff::Matrix<Scalar> m(static_cast<Eigen::Index>(cloud.size()), 3);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (int d = 0; d < 3; ++d) m(static_cast<Eigen::Index>(i), d) = static_cast<Scalar>(cloud[i][d]);
    return m;
}

template <class Scalar>
PointCloud from_matrix(const diff::Matrix<Scalar>& m) {
    std::vector<Point3> pts(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        pts[static_cast<std::size_t>(i)] = {static_cast<double>(m(i, 0)), static_cast<double>(m(i, 1)),
                                            static_cast<double>(m(i, 2))};
    return PointCloud(std::move(pts));
}

// Everything the backward pass of one encode/decode needs.
template <class Scalar>
struct AEForwardTape {
    diff::Tape<Scalar> point_tape;
    diff::MaxPoolResult<Scalar> pool;
    Eigen::Index point_count = 0;
    diff::Tape<Scalar> head_tape;
    diff::Tape<Scalar> decoder_tape;
};

template <class Scalar>
diff::RowVector<Scalar> encode_latent(const BasicAEModel<Scalar>& m, const diff::Matrix<Scalar>& points,
                                      AEForwardTape<Scalar>* tape = nullptr) {
    if (points.rows() < 1) throw InvalidArgument("encode: empty cloud");
    if (!points.allFinite()) throw InvalidArgument("encode: non-finite input");
    const auto features = diff::mlp_forward(m.point_mlp, points, tape ? &tape->point_tape : nullptr);
    auto pool = diff::maxpool_points(features);
    diff::Matrix<Scalar> pooled = pool.pooled;
    if (tape) {
        tape->point_count = points.rows();
        tape->pool = std::move(pool);
    }
    diff::Matrix<Scalar> z = diff::mlp_forward(m.head, pooled, tape ? &tape->head_tape : nullptr);
    return z.row(0);
}

// Returns output_points x 3.
template <class Scalar>
diff::Matrix<Scalar> decode_latent(const BasicAEModel<Scalar>& m, const diff::RowVector<Scalar>& z,
                                   AEForwardTape<Scalar>* tape = nullptr) {
    if (!z.allFinite()) throw InvalidArgument("decode: non-finite latent");
    diff::Matrix<Scalar> zin = z;
    const diff::Matrix<Scalar> flat = diff::mlp_forward(m.decoder, zin, tape ? &tape->decoder_tape : nullptr);
    return Eigen::Map<const diff::Matrix<Scalar>>(flat.data(), static_cast<Eigen::Index>(m.arch.output_points), 3);
}

template <class Scalar>
struct AEGradients {
    diff::NetworkParams<Scalar> point_mlp;
    diff::NetworkParams<Scalar> head;
    diff::NetworkParams<Scalar> decoder;

    static AEGradients zeros_like(const BasicAEModel<Scalar>& m) {
        return {m.point_mlp.zeros_like(), m.head.zeros_like(), m.decoder.zeros_like()};
    }
};

// Reconstruction Chamfer loss of one shape; gradients are added into `grads`.
template <class Scalar>
double reconstruction_loss_grad(const BasicAEModel<Scalar>& m, const diff::Matrix<Scalar>& shape,
                                AEGradients<Scalar>& grads) {
    AEForwardTape<Scalar> tape;
    const auto z = encode_latent(m, shape, &tape);
    const auto recon = decode_latent(m, z, &tape);
    const auto cl = diff::chamfer_loss_grad(recon, shape);

    const diff::Matrix<Scalar> d_flat =
        Eigen::Map<const diff::Matrix<Scalar>>(cl.grad.data(), 1, cl.grad.size());
    const auto dz = diff::mlp_backward_into(m.decoder, tape.decoder_tape, d_flat, grads.decoder);
    const auto dpooled = diff::mlp_backward_into(m.head, tape.head_tape, dz, grads.head);
    const diff::RowVector<Scalar> dp = dpooled.row(0);
    const auto dfeat = diff::maxpool_backward(tape.pool, dp, tape.point_count);
    diff::mlp_backward_into(m.point_mlp, tape.point_tape, dfeat, grads.point_mlp);
    return cl.loss;
}

Gfv encode(const AEModel& model, const PointCloud& cloud);
PointCloud decode(const AEModel& model, const Gfv& z);
diff::RowVector<float> to_row(const Gfv& z);
Gfv to_gfv(const diff::RowVector<float>& row);

struct AETrainConfig {
    int epochs = 400;
    std::size_t batch_size = 24;
    diff::AdamConfig adam{1e-3, 0.9, 0.999, 1e-8, {60, 120, 180, 400}, 0.5};
    std::uint64_t seed = 0;
};

struct AETrainResult {
    AEModel model;
    std::vector<double> epoch_loss;  // mean reconstruction Chamfer-L2 per epoch
};

// Trains on complete shapes, all with the same point count. The returned
// model has its decoder marked frozen.
AETrainResult train_ae(const std::vector<PointCloud>& dataset, const AEArchitecture& arch, const AETrainConfig& cfg);

// Directory layout: ae.json, encoder_point.rladnp, encoder_head.rladnp, decoder.rladnp.
void save_ae(const std::filesystem::path& dir, const AEModel& model);
AEModel load_ae(const std::filesystem::path& dir);
std::filesystem::path decoder_checkpoint_path(const std::filesystem::path& dir);

// FNV-1a over the little-endian f32 bytes of the decoder parameters.
std::uint64_t decoder_checksum(const AEModel& model);

}  // namespace rladnet
