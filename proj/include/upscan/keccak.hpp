// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "upscan/bytes.hpp"

namespace upscan {

/// Keccak-256 (original pad-0x01 variant used for contract selectors,
/// not the NIST SHA3-256 pad-0x06 variant).
std::array<std::uint8_t, 32> keccak256(const std::uint8_t* data, std::size_t size);
std::array<std::uint8_t, 32> keccak256(std::string_view text);
std::array<std::uint8_t, 32> keccak256(const Bytes& data);

}  // namespace upscan
