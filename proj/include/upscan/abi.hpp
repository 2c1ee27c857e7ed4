// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "upscan/bytes.hpp"

namespace upscan {

struct AbiParseError : std::runtime_error {
    explicit AbiParseError(const std::string& msg, std::optional<std::size_t> index = {})
        : std::runtime_error(msg), entry_index(index) {}
    std::optional<std::size_t> entry_index;
};

/// 4-byte function selector: first 4 bytes of keccak256(canonical signature).
class Selector {
public:
    Selector() : bytes_{} {}
    explicit Selector(const std::array<std::uint8_t, 4>& bytes) : bytes_(bytes) {}

    static Selector from_hex(std::string_view hex);
    /// First 4 bytes of calldata; throws std::invalid_argument if shorter.
    static Selector from_calldata(const Bytes& calldata);

    const std::array<std::uint8_t, 4>& bytes() const { return bytes_; }
    std::string hex() const;  // 0x-prefixed lowercase

    auto operator<=>(const Selector&) const = default;

private:
    std::array<std::uint8_t, 4> bytes_;
};

struct AbiParam {
    std::string name;                  // may be empty
    std::string type;                  // canonical; "tuple"/"tuple[k]"/"tuple[]" for composites
    std::vector<AbiParam> components;  // tuple members, in order

    /// Type as it appears in a canonical signature, tuples flattened
    /// to parenthesized component lists, e.g. "(address,uint256)[]".
    std::string canonical_type() const;

    bool operator==(const AbiParam&) const = default;
};

enum class Mutability { Pure, View, NonPayable, Payable };

std::string_view to_string(Mutability m);
Mutability mutability_from_string(std::string_view s);

struct AbiFunction {
    std::string name;
    std::vector<AbiParam> inputs;
    std::vector<AbiParam> outputs;
    Mutability mutability = Mutability::NonPayable;

    /// name ++ "(" ++ comma-joined canonical input types ++ ")"
    std::string signature() const;

    bool operator==(const AbiFunction&) const = default;
};

struct Abi {
    std::vector<AbiFunction> functions;  // declaration order, unique signatures
    std::optional<Address> address;
    std::string version_tag;
    bool has_fallback = false;
    bool has_receive = false;

    const AbiFunction* find_signature(std::string_view signature) const;
    const AbiFunction* find_selector(const Selector& sel) const;
    bool has_function_name(std::string_view name) const;

    bool operator==(const Abi&) const = default;
};

/// Normalizes an ABI type string: resolves the unsized aliases
/// (uint -> uint256, int -> int256, byte -> bytes1, fixed -> fixed128x18)
/// including array suffixes, and validates against the type grammar.
/// Throws AbiParseError on unknown types.
std::string canonicalize_type(std::string_view type);

/// Parses a standard contract ABI JSON document (an array of entries).
/// Function entries are captured; constructor/event/error entries are
/// ignored; fallback/receive set flags. Duplicate canonical signatures
/// and unknown type strings raise AbiParseError with the entry index.
Abi parse_abi(std::string_view document);

/// Serializes back to the standard ABI JSON array (functions plus
/// fallback/receive markers); parse_abi(serialize_abi(a)) == a.
std::string serialize_abi(const Abi& abi, int indent = -1);

Selector selector_of(const AbiFunction& f);
Selector selector_of_signature(std::string_view canonical_signature);

}  // namespace upscan
