// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/keccak.hpp"

#include <bit>
#include <cstring>

namespace upscan {

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kRotation[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                               27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

constexpr int kPiLane[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                             15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

void keccakf(std::uint64_t state[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        std::uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        for (int x = 0; x < 5; ++x) {
            const std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5) state[x + y] ^= d;
        }
        // rho + pi
        std::uint64_t cur = state[1];
        for (int i = 0; i < 24; ++i) {
            const int j = kPiLane[i];
            const std::uint64_t tmp = state[j];
            state[j] = std::rotl(cur, kRotation[i]);
            cur = tmp;
        }
        // chi
        for (int y = 0; y < 25; y += 5) {
            std::uint64_t row[5];
            for (int x = 0; x < 5; ++x) row[x] = state[y + x];
            for (int x = 0; x < 5; ++x)
                state[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
        }
        // iota
        state[0] ^= kRoundConstants[round];
    }
}

}  // namespace

std::array<std::uint8_t, 32> keccak256(const std::uint8_t* data, std::size_t size) {
    constexpr std::size_t rate = 136;  // 1600/8 - 2*256/8
    std::uint64_t state[25] = {};
    std::uint8_t block[rate];

    // absorb full blocks
    while (size >= rate) {
        for (std::size_t i = 0; i < rate / 8; ++i) {
            std::uint64_t lane;
            std::memcpy(&lane, data + i * 8, 8);
            state[i] ^= lane;  // little-endian hosts only
        }
        keccakf(state);
        data += rate;
        size -= rate;
    }

    // final block with pad10*1 (0x01 ... 0x80)
    std::memset(block, 0, rate);
    if (size > 0) std::memcpy(block, data, size);
    block[size] ^= 0x01;
    block[rate - 1] ^= 0x80;
    for (std::size_t i = 0; i < rate / 8; ++i) {
        std::uint64_t lane;
        std::memcpy(&lane, block + i * 8, 8);
        state[i] ^= lane;
    }
    keccakf(state);

    std::array<std::uint8_t, 32> digest{};
    std::memcpy(digest.data(), state, 32);
    return digest;
}

std::array<std::uint8_t, 32> keccak256(std::string_view text) {
    return keccak256(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

std::array<std::uint8_t, 32> keccak256(const Bytes& data) {
    return keccak256(data.data(), data.size());
}

}  // namespace upscan
