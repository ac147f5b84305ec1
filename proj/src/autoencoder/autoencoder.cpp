#include "autoencoder/autoencoder.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "common/error.hpp"
#include "diff/checkpoint.hpp"

namespace rladnet {

using diff::Activation;

void AEArchitecture::validate() const {
    if (point_widths.size() < 2 || point_widths.front() != 3)
        throw InvalidArgument("encoder point MLP must start at width 3");
    if (head_widths.size() < 2 || head_widths.front() != point_widths.back())
        throw InvalidArgument("encoder head must start at the pooled width");
    if (head_widths.back() != kGfvDim) throw InvalidArgument("encoder must end at width 128");
    if (output_points < 1) throw InvalidArgument("decoder must emit at least one point");
}

std::vector<diff::LayerSpec> AEArchitecture::point_specs() const {
    return diff::chain(point_widths, Activation::Relu, Activation::Relu);
}

std::vector<diff::LayerSpec> AEArchitecture::head_specs() const {
    return diff::chain(head_widths, Activation::Relu, Activation::None);
}

std::vector<diff::LayerSpec> AEArchitecture::decoder_specs() const {
    std::vector<std::size_t> w{kGfvDim};
    w.insert(w.end(), decoder_hidden.begin(), decoder_hidden.end());
    w.push_back(3 * output_points);
    return diff::chain(w, Activation::Relu, Activation::None);
}

diff::RowVector<float> to_row(const Gfv& z) {
    diff::RowVector<float> r(static_cast<Eigen::Index>(kGfvDim));
    for (std::size_t i = 0; i < kGfvDim; ++i) r(static_cast<Eigen::Index>(i)) = z[i];
    return r;
}

Gfv to_gfv(const diff::RowVector<float>& row) {
    return Gfv::from_span(std::span<const float>(row.data(), static_cast<std::size_t>(row.size())));
}

Gfv encode(const AEModel& model, const PointCloud& cloud) {
    return to_gfv(encode_latent(model, to_matrix<float>(cloud)));
}

PointCloud decode(const AEModel& model, const Gfv& z) {
    return from_matrix(decode_latent(model, to_row(z)));
}

AETrainResult train_ae(const std::vector<PointCloud>& dataset, const AEArchitecture& arch, const AETrainConfig& cfg) {
    if (dataset.empty()) throw InvalidArgument("train_ae: empty dataset");
    for (const auto& c : dataset)
        if (c.size() != dataset.front().size())
            throw InvalidArgument("train_ae: all training clouds must have the same point count");
    if (cfg.batch_size < 1) throw InvalidArgument("train_ae: batch size must be positive");

    AETrainResult result{AEModel::initialized(arch, cfg.seed), {}};
    AEModel& m = result.model;
    std::vector<diff::Matrix<float>> shapes;
    shapes.reserve(dataset.size());
    for (const auto& c : dataset) shapes.push_back(to_matrix<float>(c));

    diff::AdamState<float> opt_point(m.point_mlp, cfg.adam);
    diff::AdamState<float> opt_head(m.head, cfg.adam);
    diff::AdamState<float> opt_dec(m.decoder, cfg.adam);
    auto grads = AEGradients<float>::zeros_like(m);

    Rng rng = make_stream(cfg.seed, "ae/shuffle");
    std::vector<std::size_t> order(shapes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double total = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            grads.point_mlp.set_zero();
            grads.head.set_zero();
            grads.decoder.set_zero();
            for (std::size_t k = start; k < end; ++k) total += reconstruction_loss_grad(m, shapes[order[k]], grads);
            const float inv = 1.0f / static_cast<float>(end - start);
            grads.point_mlp.scale(inv);
            grads.head.scale(inv);
            grads.decoder.scale(inv);
            opt_point.step(m.point_mlp, grads.point_mlp, epoch);
            opt_head.step(m.head, grads.head, epoch);
            opt_dec.step(m.decoder, grads.decoder, epoch);
        }
        result.epoch_loss.push_back(total / static_cast<double>(shapes.size()));
    }
    m.decoder_frozen = true;
    return result;
}

std::filesystem::path decoder_checkpoint_path(const std::filesystem::path& dir) { return dir / "decoder.rladnp"; }

void save_ae(const std::filesystem::path& dir, const AEModel& model) {
    std::filesystem::create_directories(dir);
    nlohmann::json j{{"format", "rladnet-ae v1"},
                     {"point_widths", model.arch.point_widths},
                     {"head_widths", model.arch.head_widths},
                     {"decoder_hidden", model.arch.decoder_hidden},
                     {"output_points", model.arch.output_points},
                     {"decoder_frozen", model.decoder_frozen}};
    std::ofstream(dir / "ae.json") << j.dump(2) << '\n';
    diff::save_checkpoint(dir / "encoder_point.rladnp", model.point_mlp);
    diff::save_checkpoint(dir / "encoder_head.rladnp", model.head);
    diff::save_checkpoint(decoder_checkpoint_path(dir), model.decoder);
}

AEModel load_ae(const std::filesystem::path& dir) {
    std::ifstream in(dir / "ae.json");
    if (!in) throw IoError("missing " + (dir / "ae.json").string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError((dir / "ae.json").string(), 1, e.what());
    }
    AEModel m;
    m.arch.point_widths = j.at("point_widths").get<std::vector<std::size_t>>();
    m.arch.head_widths = j.at("head_widths").get<std::vector<std::size_t>>();
    m.arch.decoder_hidden = j.at("decoder_hidden").get<std::vector<std::size_t>>();
    m.arch.output_points = j.at("output_points").get<std::size_t>();
    m.decoder_frozen = j.value("decoder_frozen", false);
    m.arch.validate();
    const auto ps = m.arch.point_specs(), hs = m.arch.head_specs(), ds = m.arch.decoder_specs();
    m.point_mlp = diff::load_checkpoint(dir / "encoder_point.rladnp", ps);
    m.head = diff::load_checkpoint(dir / "encoder_head.rladnp", hs);
    m.decoder = diff::load_checkpoint(decoder_checkpoint_path(dir), ds);
    return m;
}

std::uint64_t decoder_checksum(const AEModel& model) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    model.decoder.for_each_scalar([&](float f) {
        auto bits = std::bit_cast<std::uint32_t>(f);
        for (int b = 0; b < 4; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    });
    return h;
}

}  // namespace rladnet
