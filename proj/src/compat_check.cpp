// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/compat.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>

namespace upscan {

std::string_view to_string(BreakKind kind) {
    switch (kind) {
        case BreakKind::Removal: return "removal";
        case BreakKind::ParameterUpdate: return "parameter_update";
        case BreakKind::ReturnChange: return "return_change";
    }
    return "unknown";
}

namespace {

std::string outputs_signature(const AbiFunction& f) {
    std::string out = "(";
    for (std::size_t i = 0; i < f.outputs.size(); ++i) {
        if (i > 0) out += ",";
        out += f.outputs[i].canonical_type();
    }
    out += ")";
    return out;
}

}  // namespace

CompatReport diff_abis(const Abi& old_abi, const Abi& new_abi) {
    CompatReport report;
    report.old_version = old_abi.version_tag;
    report.new_version = new_abi.version_tag;

    std::unordered_map<std::string, const AbiFunction*> new_by_signature;
    std::unordered_set<std::string> new_names;
    for (const auto& f : new_abi.functions) {
        new_by_signature.emplace(f.signature(), &f);
        new_names.insert(f.name);
    }

    std::set<std::pair<BreakKind, std::string>> emitted;
    const auto emit = [&](BreakingChange change) {
        if (emitted.emplace(change.kind, change.old_signature).second)
            report.changes.push_back(std::move(change));
    };

    for (const auto& old_fn : old_abi.functions) {
        const std::string old_sig = old_fn.signature();
        const auto match = new_by_signature.find(old_sig);

        if (match == new_by_signature.end()) {
            // exact signature vanished; each missing old overload counts once
            BreakingChange change;
            change.function_name = old_fn.name;
            change.old_signature = old_sig;
            change.old_selector = selector_of(old_fn);
            if (new_names.contains(old_fn.name)) {
                change.kind = BreakKind::ParameterUpdate;
                // point at one surviving same-name signature for context
                for (const auto& f : new_abi.functions) {
                    if (f.name == old_fn.name) {
                        change.new_signature = f.signature();
                        change.new_selector = selector_of(f);
                        break;
                    }
                }
            } else {
                change.kind = BreakKind::Removal;
            }
            emit(std::move(change));
            continue;
        }

        const AbiFunction& new_fn = *match->second;
        if (outputs_signature(old_fn) != outputs_signature(new_fn)) {
            BreakingChange change;
            change.kind = BreakKind::ReturnChange;
            change.function_name = old_fn.name;
            change.old_signature = old_sig;
            change.new_signature = old_sig;  // identical by definition
            change.old_selector = selector_of(old_fn);
            change.new_selector = change.old_selector;
            emit(std::move(change));
        } else if (old_fn.mutability != new_fn.mutability) {
            report.informational.push_back(
                "mutability of " + old_sig + " changed: " + std::string(to_string(old_fn.mutability)) +
                " -> " + std::string(to_string(new_fn.mutability)));
        }
    }

    std::unordered_set<std::string> old_signatures;
    for (const auto& f : old_abi.functions) old_signatures.insert(f.signature());
    for (const auto& new_fn : new_abi.functions)
        if (!old_signatures.contains(new_fn.signature()))
            report.informational.push_back("added " + new_fn.signature());

    return report;
}

std::vector<CompatReport> diff_history(const std::vector<Abi>& abis) {
    std::vector<CompatReport> reports;
    if (abis.size() < 2) return reports;
    reports.reserve(abis.size() - 1);
    for (std::size_t i = 0; i + 1 < abis.size(); ++i)
        reports.push_back(diff_abis(abis[i], abis[i + 1]));
    return reports;
}

}  // namespace upscan
