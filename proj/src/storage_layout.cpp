// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/storage_layout.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <json.hpp>

namespace upscan {

using nlohmann::json;

namespace {

constexpr unsigned kWordBytes = 32;

std::string strip_spaces(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

bool parse_number(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// Finds the matching ')' for the '(' at `open`.
std::size_t match_paren(std::string_view text, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')' && --depth == 0) return i;
    }
    throw LayoutError("unbalanced parentheses in type '" + std::string(text) + "'");
}

// Splits a comma-separated list at paren/bracket depth zero.
std::vector<std::string_view> split_top_level(std::string_view text) {
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (!text.empty()) parts.push_back(text.substr(start));
    return parts;
}

StorageType parse_stripped(std::string_view text);

StorageType parse_base(std::string_view text) {
    StorageType t;
    std::uint64_t n = 0;
    if (text == "bool") {
        t.kind = StorageType::Kind::Bool;
    } else if (text == "address" || text == "address payable" || text == "contract") {
        t.kind = StorageType::Kind::Address;
    } else if (text.starts_with("contract(") && text.back() == ')') {
        t.kind = StorageType::Kind::Address;
    } else if (text == "string") {
        t.kind = StorageType::Kind::String;
    } else if (text == "bytes") {
        t.kind = StorageType::Kind::DynamicBytes;
    } else if (text == "uint" || (text.starts_with("uint") && parse_number(text.substr(4), n))) {
        if (text == "uint") n = 256;
        if (n < 8 || n > 256 || n % 8 != 0)
            throw LayoutError("invalid integer width in '" + std::string(text) + "'");
        t.kind = StorageType::Kind::Uint;
        t.bits = static_cast<unsigned>(n);
    } else if (text == "int" || (text.starts_with("int") && parse_number(text.substr(3), n))) {
        if (text == "int") n = 256;
        if (n < 8 || n > 256 || n % 8 != 0)
            throw LayoutError("invalid integer width in '" + std::string(text) + "'");
        t.kind = StorageType::Kind::Int;
        t.bits = static_cast<unsigned>(n);
    } else if (text.starts_with("bytes") && parse_number(text.substr(5), n)) {
        if (n < 1 || n > 32) throw LayoutError("invalid bytesN width in '" + std::string(text) + "'");
        t.kind = StorageType::Kind::FixedBytes;
        t.byte_count = static_cast<unsigned>(n);
    } else if (text.starts_with("enum(") && text.back() == ')') {
        if (!parse_number(text.substr(5, text.size() - 6), n) || n < 1 || n > 65536)
            throw LayoutError("enum member count out of range in '" + std::string(text) + "'");
        t.kind = StorageType::Kind::Enum;
        t.member_count = static_cast<unsigned>(n);
    } else if (text.starts_with("mapping(") && text.back() == ')') {
        t.kind = StorageType::Kind::Mapping;
        t.mapping_inner = std::string(text.substr(8, text.size() - 9));
    } else if (text.starts_with("struct(") && text.back() == ')') {
        t.kind = StorageType::Kind::Struct;
        const auto inner = text.substr(7, text.size() - 8);
        if (!inner.empty())
            for (const auto part : split_top_level(inner)) t.children.push_back(parse_stripped(part));
    } else {
        throw LayoutError("unknown storage type '" + std::string(text) + "'");
    }
    return t;
}

StorageType parse_stripped(std::string_view text) {
    // peel one trailing array suffix, outermost last
    if (text.ends_with("]")) {
        const auto open = text.rfind('[');
        if (open == std::string_view::npos)
            throw LayoutError("malformed array type '" + std::string(text) + "'");
        const auto dim = text.substr(open + 1, text.size() - open - 2);
        StorageType element = parse_stripped(text.substr(0, open));
        StorageType t;
        if (dim.empty()) {
            t.kind = StorageType::Kind::DynamicArray;
        } else {
            std::uint64_t len = 0;
            if (!parse_number(dim, len))
                throw LayoutError("malformed array length in '" + std::string(text) + "'");
            t.kind = StorageType::Kind::FixedArray;
            t.length = len;
        }
        t.children.push_back(std::move(element));
        return t;
    }
    return parse_base(text);
}

}  // namespace

StorageType parse_storage_type(std::string_view text) {
    const std::string stripped = strip_spaces(text);
    if (stripped.empty()) throw LayoutError("empty storage type");
    return parse_stripped(stripped);
}

bool StorageType::is_value_type() const {
    switch (kind) {
        case Kind::Bool:
        case Kind::Address:
        case Kind::Uint:
        case Kind::Int:
        case Kind::FixedBytes:
        case Kind::Enum:
            return true;
        default:
            return false;
    }
}

unsigned StorageType::value_size() const {
    switch (kind) {
        case Kind::Bool: return 1;
        case Kind::Address: return 20;
        case Kind::Uint:
        case Kind::Int: return bits / 8;
        case Kind::FixedBytes: return byte_count;
        case Kind::Enum: return member_count <= 256 ? 1 : 2;
        case Kind::String:
        case Kind::DynamicBytes:
        case Kind::Mapping:
        case Kind::DynamicArray:
            return kWordBytes;  // head word
        case Kind::FixedArray:
        case Kind::Struct:
            return kWordBytes;  // whole-word aggregates
    }
    return kWordBytes;
}

std::uint64_t StorageType::word_span() const {
    switch (kind) {
        case Kind::String:
        case Kind::DynamicBytes:
        case Kind::Mapping:
        case Kind::DynamicArray:
            return 1;
        case Kind::FixedArray: {
            const StorageType& elem = children.at(0);
            std::uint64_t elem_words;
            std::uint64_t per_slot = 1;
            if (elem.is_value_type()) {
                per_slot = kWordBytes / elem.value_size();
                elem_words = 1;
            } else {
                elem_words = elem.word_span();
            }
            if (length == 0) return 0;
            std::uint64_t words;
            if (elem.is_value_type()) {
                words = (length + per_slot - 1) / per_slot;
            } else {
                if (elem_words != 0 && length > UINT64_MAX / elem_words)
                    throw LayoutError("array span overflows the word index");
                words = length * elem_words;
            }
            return words;
        }
        case Kind::Struct: {
            std::uint64_t slot = 0;
            unsigned offset = 0;
            for (const auto& field : children) {
                const unsigned size = field.is_value_type() ? field.value_size() : kWordBytes;
                const std::uint64_t span = field.is_value_type() ? 1 : field.word_span();
                const bool fresh = !field.is_value_type();
                if (fresh || kWordBytes - offset < size) {
                    if (offset > 0) { ++slot; offset = 0; }
                }
                if (field.is_value_type()) {
                    offset += size;
                    if (offset == kWordBytes) { ++slot; offset = 0; }
                } else {
                    if (slot > UINT64_MAX - span) throw LayoutError("struct span overflows");
                    slot += span;
                    offset = 0;
                }
            }
            return offset > 0 ? slot + 1 : slot;
        }
        default:
            return 1;
    }
}

std::string StorageType::canonical() const {
    switch (kind) {
        case Kind::Bool: return "bool";
        case Kind::Address: return "address";
        case Kind::Uint: return "uint" + std::to_string(bits);
        case Kind::Int: return "int" + std::to_string(bits);
        case Kind::FixedBytes: return "bytes" + std::to_string(byte_count);
        case Kind::Enum: return "enum(" + std::to_string(member_count) + ")";
        case Kind::String: return "string";
        case Kind::DynamicBytes: return "bytes";
        case Kind::Mapping: return "mapping(" + mapping_inner + ")";
        case Kind::DynamicArray: return children.at(0).canonical() + "[]";
        case Kind::FixedArray:
            return children.at(0).canonical() + "[" + std::to_string(length) + "]";
        case Kind::Struct: {
            std::string out = "struct(";
            for (std::size_t i = 0; i < children.size(); ++i) {
                if (i > 0) out += ",";
                out += children[i].canonical();
            }
            return out + ")";
        }
    }
    return "?";
}

std::string_view to_string(TypeClass c) {
    switch (c) {
        case TypeClass::Bool: return "bool";
        case TypeClass::Uint: return "uint";
        case TypeClass::Int: return "int";
        case TypeClass::Address: return "address";
        case TypeClass::FixedBytes: return "fixed_bytes";
        case TypeClass::Enum: return "enum";
        case TypeClass::StringOrBytes: return "string_or_bytes";
        case TypeClass::Mapping: return "mapping";
        case TypeClass::DynamicArray: return "dynamic_array";
        case TypeClass::FixedArray: return "fixed_array";
        case TypeClass::Struct: return "struct";
        case TypeClass::Other: break;
    }
    return "other";
}

TypeClass type_class_of(std::string_view text) {
    const std::string s = strip_spaces(text);
    if (s.ends_with("]")) {
        const auto open = s.rfind('[');
        if (open != std::string::npos)
            return s[open + 1] == ']' ? TypeClass::DynamicArray : TypeClass::FixedArray;
    }
    if (s.starts_with("mapping")) return TypeClass::Mapping;
    if (s.starts_with("struct")) return TypeClass::Struct;
    if (s.starts_with("enum")) return TypeClass::Enum;
    if (s == "bool" || s == "t_bool") return TypeClass::Bool;
    if (s == "address" || s == "addresspayable" || s.starts_with("contract"))
        return TypeClass::Address;
    if (s == "string" || s == "bytes") return TypeClass::StringOrBytes;
    if (s.starts_with("bytes")) return TypeClass::FixedBytes;
    if (s.starts_with("uint")) return TypeClass::Uint;
    if (s.starts_with("int")) return TypeClass::Int;
    return TypeClass::Other;
}

const SlotAssignment* StorageLayout::covering(std::uint64_t slot, unsigned offset) const {
    for (const auto& a : assignments) {
        if (a.spans == 0) continue;
        if (a.spans > 1) {
            if (slot >= a.slot && slot < a.slot + a.spans) return &a;
        } else if (slot == a.slot && offset >= a.offset && offset < a.offset + a.size) {
            return &a;
        }
    }
    return nullptr;
}

StorageLayout compute_layout(const std::vector<VarDecl>& decls) {
    StorageLayout layout;
    std::uint64_t slot = 0;
    unsigned offset = 0;

    for (const auto& decl : decls) {
        if (decl.is_constant_or_immutable) continue;
        StorageType type;
        try {
            type = parse_storage_type(decl.type);
        } catch (const LayoutError& e) {
            throw LayoutError("declaration '" + decl.name + "': " + e.what());
        }

        const bool aggregate = !type.is_value_type();
        const unsigned size = type.value_size();
        const std::uint64_t span = aggregate ? type.word_span() : 1;

        if (aggregate || kWordBytes - offset < size) {
            if (offset > 0) {
                ++slot;
                offset = 0;
            }
        }

        SlotAssignment assignment;
        assignment.name = decl.name;
        assignment.slot = slot;
        assignment.offset = offset;
        assignment.size = aggregate ? (span > 0 ? kWordBytes : 0) : size;
        assignment.spans = span;
        assignment.type = type.canonical();
        layout.assignments.push_back(std::move(assignment));

        if (aggregate) {
            if (slot > UINT64_MAX - span) throw LayoutError("layout exceeds the word index");
            slot += span;
            offset = 0;
        } else {
            offset += size;
            if (offset == kWordBytes) {
                ++slot;
                offset = 0;
            }
        }
    }
    return layout;
}

std::vector<VarDecl> parse_decl_list(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw LayoutError(std::string("malformed declaration JSON: ") + e.what());
    }
    if (!doc.is_array()) throw LayoutError("declaration list must be a JSON array");
    std::vector<VarDecl> decls;
    decls.reserve(doc.size());
    for (const auto& entry : doc) {
        VarDecl d;
        d.name = entry.at("name").get<std::string>();
        d.type = entry.at("type").get<std::string>();
        d.is_constant_or_immutable =
            entry.value("constant", false) || entry.value("immutable", false);
        decls.push_back(std::move(d));
    }
    return decls;
}

StorageLayout load_layout(const std::string& json_text, const std::string& version_tag) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw LayoutError(std::string("malformed layout JSON: ") + e.what());
    }

    if (doc.is_array()) {
        StorageLayout layout = compute_layout(parse_decl_list(json_text));
        layout.version_tag = version_tag;
        return layout;
    }
    if (!doc.is_object() || !doc.contains("storage"))
        throw LayoutError("layout JSON must be a declaration array or have a 'storage' key");

    // compiler-emitted storage layout
    StorageLayout layout;
    layout.version_tag = version_tag;
    const json types = doc.value("types", json::object());
    for (const auto& entry : doc.at("storage")) {
        SlotAssignment a;
        a.name = entry.at("label").get<std::string>();
        const auto& slot_field = entry.at("slot");
        a.slot = slot_field.is_string() ? std::stoull(slot_field.get<std::string>())
                                        : slot_field.get<std::uint64_t>();
        a.offset = entry.at("offset").get<unsigned>();

        const std::string type_id = entry.at("type").get<std::string>();
        std::uint64_t number_of_bytes = kWordBytes;
        std::string label = type_id;
        if (types.contains(type_id)) {
            const json& t = types.at(type_id);
            label = t.value("label", type_id);
            const auto& n = t.at("numberOfBytes");
            number_of_bytes =
                n.is_string() ? std::stoull(n.get<std::string>()) : n.get<std::uint64_t>();
        }
        a.type = label;
        if (number_of_bytes <= kWordBytes) {
            a.size = static_cast<unsigned>(number_of_bytes);
            a.spans = 1;
        } else {
            a.size = kWordBytes;
            a.spans = (number_of_bytes + kWordBytes - 1) / kWordBytes;
        }
        layout.assignments.push_back(std::move(a));
    }
    return layout;
}

std::string layout_to_json(const StorageLayout& layout, int indent) {
    json doc;
    doc["versionTag"] = layout.version_tag;
    json assignments = json::array();
    for (const auto& a : layout.assignments)
        assignments.push_back(json{{"name", a.name},
                                   {"slot", a.slot},
                                   {"offset", a.offset},
                                   {"size", a.size},
                                   {"spans", a.spans},
                                   {"type", a.type}});
    doc["assignments"] = assignments;
    return doc.dump(indent);
}

std::string_view to_string(CollisionVerdict v) {
    switch (v) {
        case CollisionVerdict::Collision: return "collision";
        case CollisionVerdict::SafeDeprecation: return "safe_deprecation";
        case CollisionVerdict::SafeReservedGap: return "safe_reserved_gap";
        case CollisionVerdict::Renamed: return "renamed";
    }
    return "unknown";
}

namespace {

std::string normalize_name(std::string_view name) {
    std::size_t begin = 0, end = name.size();
    while (begin < end && name[begin] == '_') ++begin;
    while (end > begin && name[end - 1] == '_') --end;
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i)
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
    return out;
}

bool has_deprecation_tag(std::string_view name, const DiffLayoutOptions& options) {
    return std::any_of(options.deprecation_prefixes.begin(), options.deprecation_prefixes.end(),
                       [&](const std::string& prefix) { return name.starts_with(prefix); });
}

bool is_reserved_gap(const SlotAssignment& a, const DiffLayoutOptions& options) {
    if (type_class_of(a.type) != TypeClass::FixedArray) return false;
    const std::string core = normalize_name(a.name);
    for (const auto& stem : options.reserved_stems) {
        if (!core.starts_with(stem)) continue;
        if (core.size() == stem.size()) return true;
        const char next = core[stem.size()];
        if (!std::isalpha(static_cast<unsigned char>(next))) return true;
    }
    return false;
}

std::string describe(const SlotAssignment& a) {
    return a.name + ": " + a.type;
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            const std::size_t next = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
            diag = row[j];
            row[j] = next;
        }
    }
    return row[b.size()];
}

bool fuzzy_name_match(std::string_view a, std::string_view b, unsigned max_distance) {
    const std::string na = normalize_name(a);
    const std::string nb = normalize_name(b);
    if (na == nb) return true;
    return edit_distance(na, nb) <= max_distance;
}

std::vector<CollisionFinding> diff_layouts(const StorageLayout& old_layout,
                                           const StorageLayout& new_layout,
                                           const DiffLayoutOptions& options) {
    std::vector<CollisionFinding> findings;

    for (const auto& old_a : old_layout.assignments) {
        const SlotAssignment* new_a = new_layout.covering(old_a.slot, old_a.offset);

        CollisionFinding finding;
        finding.slot = old_a.slot;
        finding.offset = old_a.offset;
        finding.old_var = describe(old_a);
        if (new_a != nullptr) finding.new_var = describe(*new_a);

        // Unchanged variable: same start, same shape, same name.
        const bool exact_location = new_a != nullptr && new_a->slot == old_a.slot &&
                                    new_a->offset == old_a.offset;
        const TypeClass old_class = type_class_of(old_a.type);
        // Inline aggregates additionally need matching element/field types:
        // equal spans can hide an internal reorder.
        const bool inline_aggregate =
            old_class == TypeClass::Struct || old_class == TypeClass::FixedArray;
        const bool same_shape = new_a != nullptr && new_a->size == old_a.size &&
                                new_a->spans == old_a.spans &&
                                type_class_of(new_a->type) == old_class &&
                                (!inline_aggregate || new_a->type == old_a.type);
        if (exact_location && same_shape && new_a->name == old_a.name) continue;

        if (is_reserved_gap(old_a, options)) {
            // The gap region is meant to be consumed by future variables.
            finding.verdict = CollisionVerdict::SafeReservedGap;
            finding.note = "reserved region may be consumed by appended variables";
            findings.push_back(std::move(finding));
            continue;
        }

        if (new_a == nullptr) {
            finding.verdict = CollisionVerdict::Collision;
            finding.note = "location no longer holds any variable";
            findings.push_back(std::move(finding));
            continue;
        }
        if (!exact_location) {
            finding.verdict = CollisionVerdict::Collision;
            finding.note = "location now covered by a variable starting elsewhere";
            findings.push_back(std::move(finding));
            continue;
        }
        if (!same_shape) {
            finding.verdict = CollisionVerdict::Collision;
            finding.note = "type or size changed at this location";
            findings.push_back(std::move(finding));
            continue;
        }
        if (has_deprecation_tag(new_a->name, options)) {
            finding.verdict = CollisionVerdict::SafeDeprecation;
            findings.push_back(std::move(finding));
            continue;
        }
        if (fuzzy_name_match(old_a.name, new_a->name, options.fuzzy_distance)) {
            finding.verdict = CollisionVerdict::Renamed;
            findings.push_back(std::move(finding));
            continue;
        }
        finding.verdict = CollisionVerdict::Collision;
        finding.note = "different variable now occupies this location";
        findings.push_back(std::move(finding));
    }

    return findings;
}

}  // namespace upscan
