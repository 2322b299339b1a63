#include "hellvec/fingerprint.hpp"

#include <algorithm>
#include <openssl/evp.h>

#include "hellvec/errors.hpp"

namespace hellvec {

namespace {

std::array<unsigned char, 32> sha256(std::string_view data) {
    std::array<unsigned char, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    return out;
}

constexpr char kHex[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string Fingerprint::hex() const {
    std::string s;
    s.reserve(32);
    for (auto b : bytes) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 0xF]);
    }
    return s;
}

Fingerprint Fingerprint::from_hex(std::string_view hex) {
    if (hex.size() != 32) throw DataError("fingerprint must be 32 hex characters");
    Fingerprint fp;
    for (std::size_t i = 0; i < 16; ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw DataError("fingerprint is not hex: " + std::string(hex));
        fp.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return fp;
}

Fingerprint Fingerprint::of(std::string_view data) {
    const auto digest = sha256(data);
    Fingerprint fp;
    std::copy_n(digest.begin(), fp.bytes.size(), fp.bytes.begin());
    return fp;
}

bool Fingerprint::is_null() const {
    return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
}

std::string sha256_hex(std::string_view data) {
    const auto digest = sha256(data);
    std::string s;
    for (auto b : digest) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 0xF]);
    }
    return s;
}

}  // namespace hellvec
