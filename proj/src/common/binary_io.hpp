#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "common/error.hpp"

namespace rladnet {

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline void write_f32_le(std::ostream& out, float f) { write_u32_le(out, std::bit_cast<std::uint32_t>(f)); }

// Sequential little-endian reader that reports byte offsets on failure.
class ByteReader {
public:
    ByteReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    void read_bytes(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw ParseError(source_, offset_, "unexpected end of file", false);
        offset_ += n;
    }
    std::uint8_t u8() {
        char c;
        read_bytes(&c, 1);
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() {
        unsigned char b[4];
        read_bytes(reinterpret_cast<char*>(b), 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }
    float f32() { return std::bit_cast<float>(u32()); }

    bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t offset_ = 0;
};

}  // namespace rladnet
