#ifndef HELLVEC_SRC_BINARY_IO_HPP
#define HELLVEC_SRC_BINARY_IO_HPP

// Little-endian primitives shared by the binary artifact formats.

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "hellvec/errors.hpp"

namespace hellvec::binary {

inline void put_bytes(std::ostream& out, const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

inline void put_u8(std::ostream& out, std::uint8_t v) { put_bytes(out, &v, 1); }

inline void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<unsigned char, 4> b{static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                         static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    put_bytes(out, b.data(), b.size());
}

inline void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    std::array<unsigned char, 8> b{};
    for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    put_bytes(out, b.data(), b.size());
}

inline bool get_bytes(std::istream& in, void* data, std::size_t n) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount()) == n;
}

inline void require_bytes(std::istream& in, void* data, std::size_t n, const char* what) {
    if (!get_bytes(in, data, n)) throw DataError(std::string(what) + ": truncated file");
}

inline std::uint8_t get_u8(std::istream& in, const char* what) {
    std::uint8_t v = 0;
    require_bytes(in, &v, 1, what);
    return v;
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
    std::array<unsigned char, 4> b{};
    require_bytes(in, b.data(), b.size(), what);
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

inline double get_f64(std::istream& in, const char* what) {
    std::array<unsigned char, 8> b{};
    require_bytes(in, b.data(), b.size(), what);
    std::uint64_t bits = 0;
    for (std::size_t i = 8; i-- > 0;) bits = bits << 8 | b[i];
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace hellvec::binary

#endif
