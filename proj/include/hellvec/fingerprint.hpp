#ifndef HELLVEC_FINGERPRINT_HPP
#define HELLVEC_FINGERPRINT_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace hellvec {

/// 16-byte digest binding artifacts to the configuration that produced them.
struct Fingerprint {
    std::array<std::uint8_t, 16> bytes{};

    std::string hex() const;
    static Fingerprint from_hex(std::string_view hex);
    /// Truncated SHA-256 of `data`.
    static Fingerprint of(std::string_view data);

    bool is_null() const;
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Full SHA-256 of `data` as lowercase hex.
std::string sha256_hex(std::string_view data);

}  // namespace hellvec

#endif
