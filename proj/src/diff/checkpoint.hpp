#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "diff/network.hpp"

namespace rladnet::diff {

// Binary checkpoint: magic "RLADNP1", then per layer
//   u32 rows, u32 cols, rows*cols f32 weights (row-major), cols f32 biases,
//   u8 activation tag.
// All little-endian. The file carries no layer count; loaders are given the
// expected architecture and reject any mismatch or trailing bytes.
inline constexpr char kCheckpointMagic[] = "RLADNP1";

void write_checkpoint(std::ostream& out, const NetworkParams<float>& params);
NetworkParams<float> read_checkpoint(std::istream& in, std::span<const LayerSpec> expected,
                                     const std::string& source = "<stream>");

void save_checkpoint(const std::filesystem::path& path, const NetworkParams<float>& params);
NetworkParams<float> load_checkpoint(const std::filesystem::path& path, std::span<const LayerSpec> expected);

}  // namespace rladnet::diff
