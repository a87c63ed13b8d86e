#pragma once

// SHA-256 and HMAC-SHA-256 over byte strings, backed by OpenSSL libcrypto.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "error.hpp"

namespace saw {

struct Digest256 {
    std::array<std::uint8_t, 32> bytes{};

    static constexpr int kBits = 256;

    /// Bit `index` in 1..256, most significant bit of byte 0 first.
    int bit(int index) const noexcept {
        const int i = index - 1;
        return (bytes[static_cast<std::size_t>(i / 8)] >> (7 - i % 8)) & 1;
    }

    void set_bit(int index, int value) noexcept {
        const int i = index - 1;
        const auto mask = static_cast<std::uint8_t>(1u << (7 - i % 8));
        auto& b = bytes[static_cast<std::size_t>(i / 8)];
        b = value ? static_cast<std::uint8_t>(b | mask) : static_cast<std::uint8_t>(b & ~mask);
    }

    std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string s;
        s.reserve(64);
        for (auto b : bytes) {
            s.push_back(digits[b >> 4]);
            s.push_back(digits[b & 15]);
        }
        return s;
    }

    static Digest256 from_hex(std::string_view hex) {
        if (hex.size() != 64)
            throw Error(ErrorCode::InvalidParams, "digest must be 64 hex characters");
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw Error(ErrorCode::InvalidParams, "digest contains a non-hex character");
        };
        Digest256 d;
        for (std::size_t i = 0; i < 32; ++i)
            d.bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
        return d;
    }

    friend bool operator==(const Digest256&, const Digest256&) = default;
};

inline int hamming_distance(const Digest256& a, const Digest256& b) noexcept {
    int n = 0;
    for (std::size_t i = 0; i < 32; ++i)
        n += std::popcount(static_cast<unsigned>(a.bytes[i] ^ b.bytes[i]));
    return n;
}

/// SHA-256 of `data`, or HMAC-SHA-256 when a hash key is supplied.
inline Digest256 digest(std::span<const std::uint8_t> data, std::optional<std::string_view> hash_key = std::nullopt) {
    Digest256 d;
    unsigned int len = 0;
    // OpenSSL wants a non-null pointer even for empty input.
    static const std::uint8_t empty = 0;
    const std::uint8_t* ptr = data.empty() ? &empty : data.data();
    if (hash_key) {
        if (!HMAC(EVP_sha256(), hash_key->data(), static_cast<int>(hash_key->size()), ptr, data.size(), d.bytes.data(),
                  &len))
            throw Error(ErrorCode::InvalidParams, "HMAC-SHA-256 failed");
    } else if (!EVP_Digest(ptr, data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr)) {
        throw Error(ErrorCode::InvalidParams, "SHA-256 failed");
    }
    return d;
}

} // namespace saw
