// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "upscan/bytes.hpp"

namespace upscan {

using BlockNumber = std::uint64_t;

/// Transport-level failure talking to a backend; retryable, distinct
/// from an in-protocol revert.
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CallStatus { Success, Revert, NotAContract };

struct CallResult {
    CallStatus status = CallStatus::Success;
    Bytes returndata;  // empty when status == NotAContract

    static CallResult success(Bytes data) { return {CallStatus::Success, std::move(data)}; }
    static CallResult revert() { return {CallStatus::Revert, {}}; }
    static CallResult not_a_contract() { return {CallStatus::NotAContract, {}}; }

    bool operator==(const CallResult&) const = default;
};

enum class TxStatus { Succeeded, Failed };

struct TransactionRecord {
    Hash32 hash;
    Address to;
    BlockNumber block = 0;
    Bytes calldata;
    TxStatus status = TxStatus::Succeeded;

    bool operator==(const TransactionRecord&) const = default;
};

/// Verified source/ABI bundle from a contract metadata registry.
struct ContractMetadata {
    std::string name;
    std::string abi_json;
    std::string source;

    bool operator==(const ContractMetadata&) const = default;
};

/// Uniform read-only access to chain state, backed by an archival node
/// or by a deterministic offline fixture. Implementations must be safe
/// for concurrent read-only requests.
class ChainProvider {
public:
    virtual ~ChainProvider() = default;

    /// Read-only call against the state at the end of `block`.
    /// Throws std::invalid_argument if block > latest_block(),
    /// TransportError on backend failure.
    virtual CallResult call_at_block(const Address& target, const Bytes& calldata,
                                     BlockNumber block) = 0;

    virtual BlockNumber latest_block() = 0;

    /// All transactions with a matching `to` in [from, to], ordered by
    /// block then intra-block position. Throws std::invalid_argument on
    /// an inverted or out-of-range window.
    virtual std::vector<TransactionRecord> transactions_to(const Address& target,
                                                           BlockNumber from, BlockNumber to) = 0;

    /// State-discarding call from a fresh externally-owned account at the
    /// latest block. Never mutates chain state.
    virtual CallResult simulate_call(const Address& target, const Bytes& calldata) = 0;

    /// Verified-source registry lookup; absent when the target is not
    /// registered. Throws TransportError on backend failure.
    virtual std::optional<ContractMetadata> fetch_contract_metadata(const Address& target) = 0;

    /// Short label identifying the backend, embedded in reports.
    virtual std::string fingerprint() const = 0;
};

}  // namespace upscan
