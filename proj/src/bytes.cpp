// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/bytes.hpp"

#include <algorithm>

namespace upscan {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(const std::uint8_t* data, std::size_t size) {
    std::string out;
    out.reserve(2 + 2 * size);
    out += "0x";
    for (std::size_t i = 0; i < size; ++i) {
        out += kHexDigits[data[i] >> 4];
        out += kHexDigits[data[i] & 0x0f];
    }
    return out;
}

std::string to_hex(const Bytes& data) {
    return to_hex(data.data(), data.size());
}

Bytes from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Address Address::from_hex(std::string_view hex) {
    const Bytes raw = upscan::from_hex(hex);
    if (raw.size() != size) throw std::invalid_argument("address must be 20 bytes");
    std::array<std::uint8_t, size> bytes{};
    std::copy(raw.begin(), raw.end(), bytes.begin());
    return Address{bytes};
}

Address Address::from_word(const Bytes& word) {
    if (word.size() != 32) throw std::invalid_argument("ABI word must be 32 bytes");
    if (!std::all_of(word.begin(), word.begin() + 12, [](std::uint8_t b) { return b == 0; }))
        throw std::invalid_argument("address word has nonzero left padding");
    std::array<std::uint8_t, size> bytes{};
    std::copy(word.begin() + 12, word.end(), bytes.begin());
    return Address{bytes};
}

std::string Address::hex() const {
    return to_hex(bytes_.data(), bytes_.size());
}

bool Address::is_zero() const {
    return std::all_of(bytes_.begin(), bytes_.end(), [](std::uint8_t b) { return b == 0; });
}

Bytes Address::to_word() const {
    Bytes word(32, 0);
    std::copy(bytes_.begin(), bytes_.end(), word.begin() + 12);
    return word;
}

Hash32 Hash32::from_hex(std::string_view hex) {
    const Bytes raw = upscan::from_hex(hex);
    if (raw.size() != size) throw std::invalid_argument("hash must be 32 bytes");
    std::array<std::uint8_t, size> bytes{};
    std::copy(raw.begin(), raw.end(), bytes.begin());
    return Hash32{bytes};
}

std::string Hash32::hex() const {
    return to_hex(bytes_.data(), bytes_.size());
}

}  // namespace upscan
