// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace upscan {

using Bytes = std::vector<std::uint8_t>;

/// Lowercase hex with 0x prefix.
std::string to_hex(const std::uint8_t* data, std::size_t size);
std::string to_hex(const Bytes& data);

/// Accepts hex with or without 0x prefix, upper or lower case.
/// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// 20-byte account identifier. Canonical rendering is lowercase 0x hex.
class Address {
public:
    static constexpr std::size_t size = 20;

    Address() : bytes_{} {}
    explicit Address(const std::array<std::uint8_t, size>& bytes) : bytes_(bytes) {}

    /// Parses "0x"-prefixed or bare 40-digit hex. Throws std::invalid_argument.
    static Address from_hex(std::string_view hex);

    /// Rightmost 20 bytes of a 32-byte ABI word. Throws std::invalid_argument
    /// if the word is not 32 bytes or the left 12 bytes are not zero.
    static Address from_word(const Bytes& word);

    const std::array<std::uint8_t, size>& bytes() const { return bytes_; }
    std::string hex() const;
    bool is_zero() const;

    /// 32-byte ABI word, address right-aligned.
    Bytes to_word() const;

    auto operator<=>(const Address&) const = default;

private:
    std::array<std::uint8_t, size> bytes_;
};

/// 32-byte identifier (transaction hash).
class Hash32 {
public:
    static constexpr std::size_t size = 32;

    Hash32() : bytes_{} {}
    explicit Hash32(const std::array<std::uint8_t, size>& bytes) : bytes_(bytes) {}

    static Hash32 from_hex(std::string_view hex);

    const std::array<std::uint8_t, size>& bytes() const { return bytes_; }
    std::string hex() const;

    auto operator<=>(const Hash32&) const = default;

private:
    std::array<std::uint8_t, size> bytes_;
};

}  // namespace upscan
