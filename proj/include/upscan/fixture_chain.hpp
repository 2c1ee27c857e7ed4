// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <atomic>
#include <map>
#include <string>
#include <vector>

#include "upscan/chain.hpp"

namespace upscan {

enum class InitGuard { Guarded, Unguarded };

/// Request kinds a FixtureProvider can serve. All of them are read-only;
/// the provider has no state-mutating entry point at all, and the request
/// log below lets tests assert that directly.
enum class RequestKind : std::size_t {
    CallAtBlock = 0,
    LatestBlock,
    TransactionsTo,
    SimulateCall,
    FetchMetadata,
    Count_,
};

std::string_view to_string(RequestKind kind);

/// Deterministic offline chain: implementation schedules per proxy, a
/// transaction log, and per-address initialization guards. Immutable
/// after load.
struct FixtureChain {
    struct ScheduleEntry {
        BlockNumber block = 0;  // activation block, end-of-block semantics
        Address implementation;

        bool operator==(const ScheduleEntry&) const = default;
    };

    BlockNumber latest = 0;
    std::map<Address, std::vector<ScheduleEntry>> schedules;
    std::vector<TransactionRecord> transactions;
    std::map<Address, InitGuard> init_guards;
    std::map<Address, ContractMetadata> metadata;

    /// Soft warnings for schedules that break the search assumptions
    /// (implementation reuse). Detection still runs on such fixtures.
    std::vector<std::string> assumption_violations;

    /// Parses the fixture chain JSON document. Throws std::invalid_argument
    /// on schema violations (activation block 0, unsorted or duplicate
    /// blocks, schedule beyond latest).
    static FixtureChain from_json(const std::string& text);
    static FixtureChain from_file(const std::string& path);

    std::string to_json(int indent = -1) const;

    /// Implementation active for `proxy` at end of `block`: the schedule
    /// entry with the greatest activation block <= block, if any.
    std::optional<Address> implementation_at(const Address& proxy, BlockNumber block) const;
};

/// ChainProvider over a FixtureChain. Counts every request it serves per
/// kind, so tests can assert that pipelines stayed read-only and bound
/// their query volume.
class FixtureProvider : public ChainProvider {
public:
    explicit FixtureProvider(FixtureChain chain, std::string name = "fixture");

    CallResult call_at_block(const Address& target, const Bytes& calldata,
                             BlockNumber block) override;
    BlockNumber latest_block() override;
    std::vector<TransactionRecord> transactions_to(const Address& target, BlockNumber from,
                                                   BlockNumber to) override;
    CallResult simulate_call(const Address& target, const Bytes& calldata) override;
    std::optional<ContractMetadata> fetch_contract_metadata(const Address& target) override;
    std::string fingerprint() const override;

    const FixtureChain& chain() const { return chain_; }

    std::size_t request_count(RequestKind kind) const;
    std::size_t total_requests() const;
    /// Kind names of every request served so far.
    std::vector<std::string> request_kinds_seen() const;
    void reset_request_log();

private:
    void count(RequestKind kind) {
        counts_[static_cast<std::size_t>(kind)].fetch_add(1, std::memory_order_relaxed);
    }

    const FixtureChain chain_;
    const std::string name_;
    std::array<std::atomic<std::size_t>, static_cast<std::size_t>(RequestKind::Count_)> counts_{};
};

}  // namespace upscan
