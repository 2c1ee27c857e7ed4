// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/impl_detect.hpp"

#include <algorithm>
#include <set>

#include "upscan/abi.hpp"

namespace upscan {

namespace {

const Bytes kImplementationCall = [] {
    const auto sel = selector_of_signature("implementation()");
    return Bytes(sel.bytes().begin(), sel.bytes().end());
}();

void flag_assumption_violations(UpgradeHistory& history) {
    std::set<Address> seen;
    for (const auto& record : history.records) {
        if (!seen.insert(record.implementation).second) {
            history.assumptions_violated = true;
            history.diagnostics.push_back("implementation " + record.implementation.hex() +
                                          " appears more than once; assumptions violated, "
                                          "history may be incomplete");
        }
    }
}

}  // namespace

const UpgradeRecord* UpgradeHistory::active_at(BlockNumber block) const {
    auto pos = std::upper_bound(records.begin(), records.end(), block,
                                [](BlockNumber b, const UpgradeRecord& r) {
                                    return b < r.activation_block;
                                });
    if (pos == records.begin()) return nullptr;
    return &*std::prev(pos);
}

std::optional<Address> query_implementation(const Address& proxy, ChainProvider& provider,
                                            BlockNumber block) {
    const CallResult result = provider.call_at_block(proxy, kImplementationCall, block);
    switch (result.status) {
        case CallStatus::NotAContract:
            return std::nullopt;
        case CallStatus::Revert:
            throw std::runtime_error("implementation() reverted at block " +
                                     std::to_string(block));
        case CallStatus::Success:
            break;
    }
    Address impl;
    try {
        impl = Address::from_word(result.returndata);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("implementation() returndata at block " + std::to_string(block) +
                                 " is not an address word: " + e.what());
    }
    if (impl.is_zero()) return std::nullopt;
    return impl;
}

UpgradeHistory detect_history(const Address& proxy, ChainProvider& provider, BlockNumber latest) {
    if (latest < 1) throw std::invalid_argument("detect_history: latest must be >= 1");
    if (latest > provider.latest_block())
        throw std::invalid_argument("detect_history: latest beyond provider tip");

    UpgradeHistory history;
    history.proxy = proxy;
    history.latest_checked = latest;

    const auto query = [&](BlockNumber block) {
        ++history.query_count;
        return query_implementation(proxy, provider, block);
    };

    struct Interval {
        BlockNumber from;
        std::optional<Address> left;
        BlockNumber end;
        std::optional<Address> right;
    };

    // Explicit work stack instead of recursion: depth is log2(latest) but
    // keeping it iterative makes the bound independent of stack limits.
    std::vector<Interval> work;
    try {
        const auto current = query(latest);
        work.push_back({0, std::nullopt, latest, current});
        while (!work.empty()) {
            const Interval iv = work.back();
            work.pop_back();
            if (iv.from == iv.end - 1) {
                // Exhausted: the boundary sits exactly at `end`. The printed
                // base case records unconditionally; recording only on an
                // actual change keeps the never-initialized single-block
                // window from minting a phantom record.
                if (iv.right != iv.left && iv.right)
                    history.records.push_back({*iv.right, iv.end});
                continue;
            }
            const BlockNumber mid = iv.from + (iv.end - iv.from) / 2;
            const auto mid_impl = query(mid);
            if (mid_impl != iv.left) work.push_back({iv.from, iv.left, mid, mid_impl});
            if (mid_impl != iv.right) work.push_back({mid, mid_impl, iv.end, iv.right});
        }
    } catch (const TransportError& e) {
        std::sort(history.records.begin(), history.records.end(),
                  [](const UpgradeRecord& a, const UpgradeRecord& b) {
                      return a.activation_block < b.activation_block;
                  });
        throw TransportError("detect_history aborted after " +
                             std::to_string(history.query_count) + " queries with " +
                             std::to_string(history.records.size()) +
                             " partial records: " + e.what());
    }

    // Halves may complete in any order; the record set is order-independent.
    std::sort(history.records.begin(), history.records.end(),
              [](const UpgradeRecord& a, const UpgradeRecord& b) {
                  return a.activation_block < b.activation_block;
              });
    flag_assumption_violations(history);
    return history;
}

UpgradeHistory linear_scan_oracle(const Address& proxy, ChainProvider& provider,
                                  BlockNumber latest) {
    if (latest > provider.latest_block())
        throw std::invalid_argument("linear_scan_oracle: latest beyond provider tip");

    UpgradeHistory history;
    history.proxy = proxy;
    history.latest_checked = latest;

    std::optional<Address> previous;  // nothing is set before genesis
    for (BlockNumber block = 0; block <= latest; ++block) {
        ++history.query_count;
        const auto current = query_implementation(proxy, provider, block);
        if (current != previous && current)
            history.records.push_back({*current, block});
        previous = current;
    }
    flag_assumption_violations(history);
    return history;
}

}  // namespace upscan
