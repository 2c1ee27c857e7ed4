// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "upscan/abi.hpp"
#include "upscan/compat.hpp"
#include "upscan/impl_detect.hpp"

namespace upscan {

/// A historical call that no longer links against the version active at
/// its block but did link against an earlier one.
struct BrokenUsage {
    Hash32 tx_hash;
    BlockNumber block = 0;
    Selector selector;
    std::string matched_old_signature;
    BreakKind kind = BreakKind::Removal;  // Removal or ParameterUpdate only
    std::string active_version;
    TxStatus tx_status = TxStatus::Succeeded;

    bool operator==(const BrokenUsage&) const = default;
};

/// A call that still links but hits a selector whose outputs changed in
/// some prior upgrade. Calldata cannot witness a return-decode mismatch,
/// so these are candidates, never broken usages.
struct ReturnChangeCandidate {
    Hash32 tx_hash;
    BlockNumber block = 0;
    Selector selector;
    std::string signature;
    std::string active_version;

    bool operator==(const ReturnChangeCandidate&) const = default;
};

struct UnknownSelectorUsage {
    Hash32 tx_hash;
    BlockNumber block = 0;
    Selector selector;

    bool operator==(const UnknownSelectorUsage&) const = default;
};

struct ScanResult {
    std::vector<BrokenUsage> broken;
    std::vector<ReturnChangeCandidate> return_change_candidates;
    /// Selectors never seen in any historical version: fallback traffic or
    /// garbage, reported separately rather than as broken usages.
    std::vector<UnknownSelectorUsage> unknown_selector;
    std::size_t skipped_missing_abi = 0;   // txs whose active version has no ABI
    std::size_t skipped_no_version = 0;    // txs before the first activation
    std::size_t skipped_short_calldata = 0;
    std::vector<std::string> diagnostics;
};

/// Version tag used to key ABIs to history records when none is supplied:
/// the implementation address in canonical hex.
std::string default_version_tag(const Address& implementation);

/// Scans a transaction stream against the upgrade timeline. For each call
/// with a selector: nothing is emitted when it links against the version
/// active at its block; a BrokenUsage is emitted when it only links
/// against an earlier version (ParameterUpdate when the active ABI still
/// has the name under another signature, Removal otherwise). Failed
/// transactions are scanned too; their status is carried along.
ScanResult scan_usages(const UpgradeHistory& history,
                       const std::map<std::string, Abi>& abis_by_version,
                       const std::vector<TransactionRecord>& txs);

/// Parses a newline-delimited transaction export: one
/// "hash,to,block,calldataHex,status" record per line; '#' lines and blank
/// lines are skipped. Throws std::invalid_argument with the line number.
std::vector<TransactionRecord> parse_tx_export(const std::string& text);
std::string format_tx_export(const std::vector<TransactionRecord>& txs);

}  // namespace upscan
