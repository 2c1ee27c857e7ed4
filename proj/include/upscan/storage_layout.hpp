// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace upscan {

struct LayoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered state-variable declaration, inheritance-linearized upstream.
struct VarDecl {
    std::string name;
    std::string type;  // storage type grammar, see parse_storage_type
    bool is_constant_or_immutable = false;

    bool operator==(const VarDecl&) const = default;
};

/// Storage type grammar:
///   bool | address | contract | uintN | intN | bytesN | string | bytes
///   enum(memberCount)
///   mapping(keyType=>valueType)
///   struct(type,type,...)
///   T[] and T[k] array suffixes
struct StorageType {
    enum class Kind {
        Bool,
        Address,
        Uint,
        Int,
        FixedBytes,
        Enum,
        String,
        DynamicBytes,
        Mapping,
        DynamicArray,
        FixedArray,
        Struct,
    };

    Kind kind = Kind::Uint;
    unsigned bits = 256;           // Uint/Int
    unsigned byte_count = 0;       // FixedBytes
    unsigned member_count = 0;     // Enum
    std::uint64_t length = 0;      // FixedArray
    std::string mapping_inner;     // Mapping, normalized "key=>value" text
    std::vector<StorageType> children;  // element (arrays) or fields (structs)

    bool is_value_type() const;
    /// Bytes a value-type head occupies (value types and heads only).
    unsigned value_size() const;
    /// Full storage words an aggregate consumes; 1 for value types/heads.
    std::uint64_t word_span() const;
    std::string canonical() const;

    bool operator==(const StorageType&) const = default;
};

StorageType parse_storage_type(std::string_view text);

/// Coarse family used for collision verdicts, derivable from either our
/// canonical strings or compiler-emitted type labels.
enum class TypeClass {
    Bool,
    Uint,
    Int,
    Address,
    FixedBytes,
    Enum,
    StringOrBytes,
    Mapping,
    DynamicArray,
    FixedArray,
    Struct,
    Other,
};

std::string_view to_string(TypeClass c);
TypeClass type_class_of(std::string_view canonical_or_label);

struct SlotAssignment {
    std::string name;
    std::uint64_t slot = 0;
    unsigned offset = 0;       // byte offset within the head slot, 0-31
    unsigned size = 0;         // bytes occupied in the head slot
    std::uint64_t spans = 1;   // head-slot words for inline aggregates
    std::string type;          // canonical type text or compiler label

    bool operator==(const SlotAssignment&) const = default;
};

struct StorageLayout {
    std::string version_tag;
    std::vector<SlotAssignment> assignments;  // declaration order

    /// Assignment whose head-slot byte range covers (slot, offset), if any.
    const SlotAssignment* covering(std::uint64_t slot, unsigned offset) const;

    bool operator==(const StorageLayout&) const = default;
};

/// Lays out declarations under the documented packing rules: value types
/// pack into the current slot while space remains, 32-byte values align
/// to a fresh word, structs and fixed arrays start fresh slots and occupy
/// whole words, dynamic heads take one full slot, constants take nothing.
/// Throws LayoutError naming the declaration on unknown types.
StorageLayout compute_layout(const std::vector<VarDecl>& decls);

/// Declaration-list JSON: [{"name","type","constant"?}]
std::vector<VarDecl> parse_decl_list(const std::string& json_text);

/// Accepts either a declaration-list JSON (computed here) or a
/// compiler-emitted storage-layout JSON ({"storage":[...],"types":{...}},
/// mapped label->name, slot->slot, offset->offset, numberOfBytes->size).
StorageLayout load_layout(const std::string& json_text, const std::string& version_tag = "");

std::string layout_to_json(const StorageLayout& layout, int indent = -1);

enum class CollisionVerdict { Collision, SafeDeprecation, SafeReservedGap, Renamed };

std::string_view to_string(CollisionVerdict v);

struct CollisionFinding {
    std::uint64_t slot = 0;
    unsigned offset = 0;
    std::string old_var;  // "name: type"
    std::optional<std::string> new_var;
    CollisionVerdict verdict = CollisionVerdict::Collision;
    std::string note;

    bool operator==(const CollisionFinding&) const = default;
};

struct DiffLayoutOptions {
    unsigned fuzzy_distance = 2;
    std::vector<std::string> deprecation_prefixes = {"_deprecated_", "deprecated_", "__unused"};
    std::vector<std::string> reserved_stems = {"gap", "reserved"};
};

/// For every old variable, checks that the same storage location is still
/// held by the same (possibly renamed or deprecated) variable in the new
/// layout. Reserved-gap regions may be consumed by new variables without
/// a collision. Unchanged variables produce no finding.
std::vector<CollisionFinding> diff_layouts(const StorageLayout& old_layout,
                                           const StorageLayout& new_layout,
                                           const DiffLayoutOptions& options = {});

/// Case-folds, strips surrounding underscores, then accepts equality or
/// edit distance <= threshold.
bool fuzzy_name_match(std::string_view a, std::string_view b, unsigned max_distance = 2);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace upscan
