#include "diff/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace rladnet::diff {

void write_checkpoint(std::ostream& out, const NetworkParams<float>& params) {
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic) - 1);
    for (const auto& l : params.layers()) {
        write_u32_le(out, static_cast<std::uint32_t>(l.weight.rows()));
        write_u32_le(out, static_cast<std::uint32_t>(l.weight.cols()));
        for (Eigen::Index i = 0; i < l.weight.size(); ++i) write_f32_le(out, l.weight.data()[i]);
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) write_f32_le(out, l.bias.data()[i]);
        const auto tag = static_cast<std::uint8_t>(l.activation);
        out.write(reinterpret_cast<const char*>(&tag), 1);
    }
    if (!out) throw IoError("failed writing checkpoint");
}

NetworkParams<float> read_checkpoint(std::istream& in, std::span<const LayerSpec> expected,
                                     const std::string& source) {
    ByteReader r(in, source);
    char magic[sizeof(kCheckpointMagic) - 1];
    r.read_bytes(magic, sizeof(magic));
    if (std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
        throw ParseError(source, 0, "bad checkpoint magic", false);

    NetworkParams<float> params(expected);
    auto& layers = params.mutable_layers();
    for (std::size_t li = 0; li < expected.size(); ++li) {
        const std::size_t at = r.offset();
        const std::uint32_t rows = r.u32();
        const std::uint32_t cols = r.u32();
        if (rows != expected[li].in || cols != expected[li].out)
            throw InvalidArgument(source + ": layer " + std::to_string(li) + " is " + std::to_string(rows) + "x" +
                                  std::to_string(cols) + ", expected " + std::to_string(expected[li].in) + "x" +
                                  std::to_string(expected[li].out) + " (offset " + std::to_string(at) + ")");
        auto& l = layers[li];
        for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = r.f32();
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias.data()[i] = r.f32();
        const std::uint8_t tag = r.u8();
        if (tag > 2) throw ParseError(source, r.offset() - 1, "unknown activation tag", false);
        if (static_cast<Activation>(tag) != expected[li].activation)
            throw InvalidArgument(source + ": layer " + std::to_string(li) + " activation mismatch");
    }
    if (!r.at_end()) throw ParseError(source, r.offset(), "trailing bytes after last layer", false);
    if (!params.all_finite()) throw InvalidArgument(source + ": non-finite parameters");
    return params;
}

void save_checkpoint(const std::filesystem::path& path, const NetworkParams<float>& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_checkpoint(out, params);
}

NetworkParams<float> load_checkpoint(const std::filesystem::path& path, std::span<const LayerSpec> expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_checkpoint(in, expected, path.string());
}

}  // namespace rladnet::diff
