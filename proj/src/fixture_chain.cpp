// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/fixture_chain.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "upscan/abi.hpp"

namespace upscan {

using nlohmann::json;

namespace {

const Selector kImplementationSelector = selector_of_signature("implementation()");

TxStatus tx_status_from_string(const std::string& s) {
    if (s == "succeeded") return TxStatus::Succeeded;
    if (s == "failed") return TxStatus::Failed;
    throw std::invalid_argument("fixture: transaction status must be 'succeeded' or 'failed'");
}

std::string tx_status_to_string(TxStatus s) {
    return s == TxStatus::Succeeded ? "succeeded" : "failed";
}

}  // namespace

std::string_view to_string(RequestKind kind) {
    switch (kind) {
        case RequestKind::CallAtBlock: return "call_at_block";
        case RequestKind::LatestBlock: return "latest_block";
        case RequestKind::TransactionsTo: return "transactions_to";
        case RequestKind::SimulateCall: return "simulate_call";
        case RequestKind::FetchMetadata: return "fetch_contract_metadata";
        case RequestKind::Count_: break;
    }
    return "unknown";
}

FixtureChain FixtureChain::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("fixture: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("fixture: document must be a JSON object");

    FixtureChain chain;
    chain.latest = doc.at("latest").get<BlockNumber>();

    for (const auto& [proxy_hex, entries] : doc.value("schedules", json::object()).items()) {
        const Address proxy = Address::from_hex(proxy_hex);
        std::vector<ScheduleEntry> schedule;
        std::set<Address> seen_impls;
        BlockNumber prev_block = 0;
        for (const auto& pair : entries) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("fixture: schedule entry must be [block, implHex]");
            ScheduleEntry entry;
            entry.block = pair[0].get<BlockNumber>();
            entry.implementation = Address::from_hex(pair[1].get<std::string>());
            if (entry.block == 0)
                throw std::invalid_argument("fixture: activation block 0 is not representable");
            if (entry.block > chain.latest)
                throw std::invalid_argument("fixture: schedule entry beyond latest block");
            if (!schedule.empty() && entry.block <= prev_block)
                throw std::invalid_argument("fixture: schedule blocks must strictly increase");
            if (entry.implementation.is_zero())
                throw std::invalid_argument("fixture: zero implementation address in schedule");
            if (!seen_impls.insert(entry.implementation).second)
                chain.assumption_violations.push_back(
                    "proxy " + proxy.hex() + " reuses implementation " +
                    entry.implementation.hex() + "; history may be incomplete");
            prev_block = entry.block;
            schedule.push_back(entry);
        }
        chain.schedules.emplace(proxy, std::move(schedule));
    }

    for (const auto& tx : doc.value("transactions", json::array())) {
        TransactionRecord record;
        record.hash = Hash32::from_hex(tx.at("hash").get<std::string>());
        record.to = Address::from_hex(tx.at("to").get<std::string>());
        record.block = tx.at("block").get<BlockNumber>();
        record.calldata = from_hex(tx.at("calldata").get<std::string>());
        record.status = tx_status_from_string(tx.value("status", "succeeded"));
        if (record.block > chain.latest)
            throw std::invalid_argument("fixture: transaction beyond latest block");
        chain.transactions.push_back(std::move(record));
    }
    // normalize to block order, keeping intra-block input order
    std::stable_sort(chain.transactions.begin(), chain.transactions.end(),
                     [](const TransactionRecord& a, const TransactionRecord& b) {
                         return a.block < b.block;
                     });

    for (const auto& [addr_hex, guard] : doc.value("initGuards", json::object()).items()) {
        const std::string g = guard.get<std::string>();
        if (g != "guarded" && g != "unguarded")
            throw std::invalid_argument("fixture: initGuards value must be 'guarded'|'unguarded'");
        chain.init_guards.emplace(Address::from_hex(addr_hex),
                                  g == "guarded" ? InitGuard::Guarded : InitGuard::Unguarded);
    }

    for (const auto& [addr_hex, bundle] : doc.value("metadata", json::object()).items()) {
        ContractMetadata meta;
        meta.name = bundle.value("name", "");
        meta.abi_json = bundle.value("abi", "");
        meta.source = bundle.value("source", "");
        chain.metadata.emplace(Address::from_hex(addr_hex), std::move(meta));
    }

    return chain;
}

FixtureChain FixtureChain::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("fixture: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string FixtureChain::to_json(int indent) const {
    json doc;
    doc["latest"] = latest;
    json schedules_json = json::object();
    for (const auto& [proxy, schedule] : schedules) {
        json entries = json::array();
        for (const auto& e : schedule)
            entries.push_back(json::array({e.block, e.implementation.hex()}));
        schedules_json[proxy.hex()] = entries;
    }
    doc["schedules"] = schedules_json;
    json txs = json::array();
    for (const auto& tx : transactions) {
        txs.push_back(json{{"hash", tx.hash.hex()},
                           {"to", tx.to.hex()},
                           {"block", tx.block},
                           {"calldata", to_hex(tx.calldata)},
                           {"status", tx_status_to_string(tx.status)}});
    }
    doc["transactions"] = txs;
    json guards = json::object();
    for (const auto& [addr, guard] : init_guards)
        guards[addr.hex()] = guard == InitGuard::Guarded ? "guarded" : "unguarded";
    doc["initGuards"] = guards;
    if (!metadata.empty()) {
        json meta = json::object();
        for (const auto& [addr, bundle] : metadata)
            meta[addr.hex()] =
                json{{"name", bundle.name}, {"abi", bundle.abi_json}, {"source", bundle.source}};
        doc["metadata"] = meta;
    }
    return doc.dump(indent);
}

std::optional<Address> FixtureChain::implementation_at(const Address& proxy,
                                                       BlockNumber block) const {
    const auto it = schedules.find(proxy);
    if (it == schedules.end()) return std::nullopt;
    const auto& schedule = it->second;
    // last entry with activation block <= block
    auto pos = std::upper_bound(
        schedule.begin(), schedule.end(), block,
        [](BlockNumber b, const ScheduleEntry& e) { return b < e.block; });
    if (pos == schedule.begin()) return std::nullopt;
    return std::prev(pos)->implementation;
}

FixtureProvider::FixtureProvider(FixtureChain chain, std::string name)
    : chain_(std::move(chain)), name_(std::move(name)) {}

CallResult FixtureProvider::call_at_block(const Address& target, const Bytes& calldata,
                                          BlockNumber block) {
    count(RequestKind::CallAtBlock);
    if (block > chain_.latest)
        throw std::invalid_argument("call_at_block: block beyond latest");

    const bool is_proxy = chain_.schedules.contains(target);
    const bool is_known = is_proxy || chain_.init_guards.contains(target) ||
                          chain_.metadata.contains(target);
    if (!is_known) return CallResult::not_a_contract();

    if (is_proxy && calldata.size() >= 4 &&
        Selector::from_calldata(calldata) == kImplementationSelector) {
        const auto impl = chain_.implementation_at(target, block);
        return CallResult::success(impl ? impl->to_word() : Address{}.to_word());
    }
    return CallResult::success({});
}

BlockNumber FixtureProvider::latest_block() {
    count(RequestKind::LatestBlock);
    return chain_.latest;
}

std::vector<TransactionRecord> FixtureProvider::transactions_to(const Address& target,
                                                                BlockNumber from, BlockNumber to) {
    count(RequestKind::TransactionsTo);
    if (from > to) throw std::invalid_argument("transactions_to: inverted range");
    if (to > chain_.latest) throw std::invalid_argument("transactions_to: range beyond latest");
    std::vector<TransactionRecord> out;
    for (const auto& tx : chain_.transactions)
        if (tx.to == target && tx.block >= from && tx.block <= to) out.push_back(tx);
    return out;
}

CallResult FixtureProvider::simulate_call(const Address& target, const Bytes&) {
    count(RequestKind::SimulateCall);
    const auto it = chain_.init_guards.find(target);
    if (it == chain_.init_guards.end()) return CallResult::not_a_contract();
    return it->second == InitGuard::Unguarded ? CallResult::success({}) : CallResult::revert();
}

std::optional<ContractMetadata> FixtureProvider::fetch_contract_metadata(const Address& target) {
    count(RequestKind::FetchMetadata);
    const auto it = chain_.metadata.find(target);
    if (it == chain_.metadata.end()) return std::nullopt;
    return it->second;
}

std::string FixtureProvider::fingerprint() const {
    return name_;
}

std::size_t FixtureProvider::request_count(RequestKind kind) const {
    return counts_[static_cast<std::size_t>(kind)].load(std::memory_order_relaxed);
}

std::size_t FixtureProvider::total_requests() const {
    std::size_t total = 0;
    for (const auto& c : counts_) total += c.load(std::memory_order_relaxed);
    return total;
}

std::vector<std::string> FixtureProvider::request_kinds_seen() const {
    std::vector<std::string> kinds;
    for (std::size_t i = 0; i < counts_.size(); ++i)
        if (counts_[i].load(std::memory_order_relaxed) > 0)
            kinds.emplace_back(to_string(static_cast<RequestKind>(i)));
    return kinds;
}

void FixtureProvider::reset_request_log() {
    for (auto& c : counts_) c.store(0, std::memory_order_relaxed);
}

}  // namespace upscan
