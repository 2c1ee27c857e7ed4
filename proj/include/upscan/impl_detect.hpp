// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "upscan/chain.hpp"

namespace upscan {

struct UpgradeRecord {
    Address implementation;
    BlockNumber activation_block = 0;  // >= 1; end-of-block activation semantics

    auto operator<=>(const UpgradeRecord&) const = default;
};

struct UpgradeHistory {
    Address proxy;
    std::vector<UpgradeRecord> records;  // strictly ascending activation blocks
    BlockNumber latest_checked = 0;
    std::uint64_t query_count = 0;  // call_at_block invocations issued

    /// Set when the recovered records themselves violate the search
    /// assumptions (an implementation appears twice), meaning the history
    /// may be incomplete.
    bool assumptions_violated = false;
    std::vector<std::string> diagnostics;

    /// Record with the greatest activation block <= block, if any.
    const UpgradeRecord* active_at(BlockNumber block) const;
};

/// Reconstructs the full implementation-upgrade history of `proxy` over
/// [0, latest] by divide-and-conquer over historic "implementation()"
/// snapshots. Needs O(k log latest) queries for k upgrades. Correct when
/// no implementation is ever reused and at most one upgrade lands per
/// block; violations observable from the result set are flagged.
/// Throws std::invalid_argument when latest is 0 or beyond the provider,
/// and propagates TransportError with partial-results context.
UpgradeHistory detect_history(const Address& proxy, ChainProvider& provider, BlockNumber latest);

/// O(latest) baseline: queries the implementation at every block in
/// [0, latest] and returns the exact boundary set. Ground truth for
/// equivalence testing; impractical against live backends.
UpgradeHistory linear_scan_oracle(const Address& proxy, ChainProvider& provider,
                                  BlockNumber latest);

/// One "implementation()" snapshot query: zero address and NotAContract
/// both normalize to "no implementation". Revert or a malformed word is
/// reported as a per-block decode error via std::runtime_error.
std::optional<Address> query_implementation(const Address& proxy, ChainProvider& provider,
                                            BlockNumber block);

}  // namespace upscan
