// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "upscan/abi.hpp"

namespace upscan {

/// The three classes of ABI breaking change between consecutive versions:
/// a function disappears outright, its input list changes with no
/// backward-compatible overload left behind, or its outputs change under
/// an identical signature.
enum class BreakKind { Removal, ParameterUpdate, ReturnChange };

std::string_view to_string(BreakKind kind);

struct BreakingChange {
    BreakKind kind = BreakKind::Removal;
    std::string function_name;
    std::string old_signature;
    std::optional<std::string> new_signature;  // absent for Removal
    Selector old_selector;
    std::optional<Selector> new_selector;

    bool operator==(const BreakingChange&) const = default;
};

struct CompatReport {
    std::optional<Address> proxy;
    std::string old_version;
    std::string new_version;
    std::vector<BreakingChange> changes;        // deduplicated by (kind, old_signature)
    std::vector<std::string> informational;     // additions, mutability changes

    bool has_changes() const { return !changes.empty(); }

    bool operator==(const CompatReport&) const = default;
};

/// Classifies every old function against the new ABI:
///  - name gone entirely                      -> Removal
///  - name kept, exact input signature gone   -> ParameterUpdate
///    (retaining the old signature as an overload suppresses this)
///  - identical signature, outputs differ     -> ReturnChange
/// Added functions and mutability changes are informational only.
/// Total: never fails on canonical inputs.
CompatReport diff_abis(const Abi& old_abi, const Abi& new_abi);

/// Pairwise reports over an activation-ordered version list; < 2 versions
/// yields no reports.
std::vector<CompatReport> diff_history(const std::vector<Abi>& abis);

}  // namespace upscan
