// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/usage_scan.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace upscan {

std::string default_version_tag(const Address& implementation) {
    return implementation.hex();
}

namespace {

struct SelectorKey {
    std::array<std::uint8_t, 4> b;
    bool operator==(const SelectorKey&) const = default;
};

struct SelectorKeyHash {
    std::size_t operator()(const SelectorKey& k) const {
        std::uint32_t v;
        std::memcpy(&v, k.b.data(), 4);
        return std::hash<std::uint32_t>{}(v);
    }
};

}  // namespace

ScanResult scan_usages(const UpgradeHistory& history,
                       const std::map<std::string, Abi>& abis_by_version,
                       const std::vector<TransactionRecord>& txs) {
    ScanResult result;

    // Per-version selector tables, ordered by activation.
    struct VersionInfo {
        std::string tag;
        BlockNumber activation = 0;
        const Abi* abi = nullptr;  // null when the version's ABI is missing
        std::unordered_map<SelectorKey, const AbiFunction*, SelectorKeyHash> by_selector;
    };
    std::vector<VersionInfo> versions;
    versions.reserve(history.records.size());
    std::set<std::string> missing_abi_reported;
    for (const auto& record : history.records) {
        VersionInfo info;
        info.tag = default_version_tag(record.implementation);
        info.activation = record.activation_block;
        const auto it = abis_by_version.find(info.tag);
        if (it != abis_by_version.end()) {
            info.abi = &it->second;
            for (const auto& f : info.abi->functions)
                info.by_selector.emplace(SelectorKey{selector_of(f).bytes()}, &f);
        } else if (missing_abi_reported.insert(info.tag).second) {
            result.diagnostics.push_back("no ABI for version " + info.tag +
                                         "; its transactions are skipped");
        }
        versions.push_back(std::move(info));
    }

    // Selectors affected by a ReturnChange, with the activation block of the
    // version that introduced the change.
    std::unordered_map<SelectorKey, std::pair<BlockNumber, std::string>, SelectorKeyHash>
        return_changed;
    for (std::size_t i = 0; i + 1 < versions.size(); ++i) {
        if (!versions[i].abi || !versions[i + 1].abi) continue;
        const CompatReport pair_report = diff_abis(*versions[i].abi, *versions[i + 1].abi);
        for (const auto& change : pair_report.changes) {
            if (change.kind != BreakKind::ReturnChange) continue;
            const SelectorKey key{change.old_selector.bytes()};
            if (!return_changed.contains(key))
                return_changed.emplace(key,
                                       std::make_pair(versions[i + 1].activation,
                                                      change.old_signature));
        }
    }

    const auto version_index_at = [&](BlockNumber block) -> std::ptrdiff_t {
        std::ptrdiff_t idx = -1;
        for (std::size_t i = 0; i < versions.size(); ++i)
            if (versions[i].activation <= block) idx = static_cast<std::ptrdiff_t>(i);
        return idx;
    };

    for (const auto& tx : txs) {
        if (tx.calldata.empty()) continue;  // plain value transfer
        if (tx.calldata.size() < 4) {
            ++result.skipped_short_calldata;
            continue;
        }
        const Selector selector = Selector::from_calldata(tx.calldata);
        const SelectorKey key{selector.bytes()};

        const std::ptrdiff_t active_idx = version_index_at(tx.block);
        if (active_idx < 0) {
            ++result.skipped_no_version;
            continue;
        }
        const VersionInfo& active = versions[static_cast<std::size_t>(active_idx)];
        if (!active.abi) {
            ++result.skipped_missing_abi;
            continue;
        }

        const auto active_fn = active.by_selector.find(key);
        if (active_fn != active.by_selector.end()) {
            // Still links. Flag informationally if its outputs changed in an
            // upgrade that is already active at this block.
            const auto rc = return_changed.find(key);
            if (rc != return_changed.end() && rc->second.first <= tx.block)
                result.return_change_candidates.push_back(
                    {tx.hash, tx.block, selector, rc->second.second, active.tag});
            continue;
        }

        // Does any earlier version link this selector?
        const AbiFunction* old_fn = nullptr;
        for (std::ptrdiff_t i = active_idx - 1; i >= 0; --i) {
            const auto& earlier = versions[static_cast<std::size_t>(i)];
            const auto hit = earlier.by_selector.find(key);
            if (hit != earlier.by_selector.end()) {
                old_fn = hit->second;
                break;
            }
        }
        if (old_fn != nullptr) {
            BrokenUsage usage;
            usage.tx_hash = tx.hash;
            usage.block = tx.block;
            usage.selector = selector;
            usage.matched_old_signature = old_fn->signature();
            usage.kind = active.abi->has_function_name(old_fn->name) ? BreakKind::ParameterUpdate
                                                                     : BreakKind::Removal;
            usage.active_version = active.tag;
            usage.tx_status = tx.status;
            result.broken.push_back(std::move(usage));
            continue;
        }

        // Not in the active version nor any earlier one.
        bool known_somewhere = false;
        for (const auto& v : versions)
            if (v.by_selector.contains(key)) {
                known_somewhere = true;
                break;
            }
        if (!known_somewhere) {
            result.unknown_selector.push_back({tx.hash, tx.block, selector});
        }
        // Selectors only known in later versions are premature calls, not
        // upgrade-induced breakage; they are intentionally not flagged.
    }

    return result;
}

std::vector<TransactionRecord> parse_tx_export(const std::string& text) {
    std::vector<TransactionRecord> txs;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::array<std::string, 5> fields;
        std::size_t field = 0, start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field >= fields.size())
                    throw std::invalid_argument("tx export line " + std::to_string(line_no) +
                                                ": too many fields");
                fields[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != fields.size())
            throw std::invalid_argument("tx export line " + std::to_string(line_no) +
                                        ": expected hash,to,block,calldata,status");
        try {
            TransactionRecord tx;
            tx.hash = Hash32::from_hex(fields[0]);
            tx.to = Address::from_hex(fields[1]);
            tx.block = std::stoull(fields[2]);
            tx.calldata = fields[3].empty() ? Bytes{} : from_hex(fields[3]);
            if (fields[4] == "succeeded") tx.status = TxStatus::Succeeded;
            else if (fields[4] == "failed") tx.status = TxStatus::Failed;
            else throw std::invalid_argument("status must be succeeded|failed");
            txs.push_back(std::move(tx));
        } catch (const std::exception& e) {
            throw std::invalid_argument("tx export line " + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
    return txs;
}

std::string format_tx_export(const std::vector<TransactionRecord>& txs) {
    std::ostringstream out;
    out << "# hash,to,block,calldata,status\n";
    for (const auto& tx : txs) {
        out << tx.hash.hex() << ',' << tx.to.hex() << ',' << tx.block << ','
            << to_hex(tx.calldata) << ',' << (tx.status == TxStatus::Succeeded ? "succeeded" : "failed")
            << '\n';
    }
    return out.str();
}

}  // namespace upscan
