// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/abi.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include <json.hpp>

#include "upscan/keccak.hpp"

namespace upscan {

using nlohmann::json;

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
    if (s.empty() || (s.size() > 1 && s[0] == '0')) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool valid_elementary(std::string_view base) {
    if (base == "address" || base == "bool" || base == "string" || base == "bytes" ||
        base == "function" || base == "tuple")
        return true;
    unsigned n = 0;
    if (base.starts_with("uint") && parse_uint(base.substr(4), n))
        return n >= 8 && n <= 256 && n % 8 == 0;
    if (base.starts_with("int") && parse_uint(base.substr(3), n))
        return n >= 8 && n <= 256 && n % 8 == 0;
    if (base.starts_with("bytes") && parse_uint(base.substr(5), n)) return n >= 1 && n <= 32;
    const auto fixed_body = [&](std::string_view body) {
        const auto x = body.find('x');
        if (x == std::string_view::npos) return false;
        unsigned m = 0, d = 0;
        if (!parse_uint(body.substr(0, x), m) || !parse_uint(body.substr(x + 1), d)) return false;
        return m >= 8 && m <= 256 && m % 8 == 0 && d >= 1 && d <= 80;
    };
    if (base.starts_with("ufixed")) return fixed_body(base.substr(6));
    if (base.starts_with("fixed")) return fixed_body(base.substr(5));
    return false;
}

// Splits trailing array suffixes off a type: "uint[2][]" -> ("uint", "[2][]").
// Returns false when brackets are malformed.
bool split_array_suffix(std::string_view type, std::string_view& base, std::string& suffix) {
    std::size_t end = type.size();
    suffix.clear();
    std::vector<std::string> dims;
    while (end > 0 && type[end - 1] == ']') {
        const auto open = type.rfind('[', end - 1);
        if (open == std::string_view::npos) return false;
        const auto dim = type.substr(open + 1, end - 1 - open - 1);
        unsigned n = 0;
        if (!dim.empty() && !parse_uint(dim, n)) return false;
        dims.push_back("[" + std::string(dim) + "]");
        end = open;
    }
    base = type.substr(0, end);
    for (auto it = dims.rbegin(); it != dims.rend(); ++it) suffix += *it;
    return true;
}

std::string canonical_base(std::string_view base) {
    if (base == "uint") return "uint256";
    if (base == "int") return "int256";
    if (base == "byte") return "bytes1";
    if (base == "fixed") return "fixed128x18";
    if (base == "ufixed") return "ufixed128x18";
    return std::string(base);
}

AbiParam parse_param(const json& entry, std::size_t index);

std::vector<AbiParam> parse_params(const json& arr, std::size_t index) {
    std::vector<AbiParam> out;
    if (arr.is_null()) return out;
    if (!arr.is_array()) throw AbiParseError("parameter list is not an array", index);
    out.reserve(arr.size());
    for (const auto& p : arr) out.push_back(parse_param(p, index));
    return out;
}

AbiParam parse_param(const json& entry, std::size_t index) {
    if (!entry.is_object() || !entry.contains("type"))
        throw AbiParseError("parameter entry missing type", index);
    AbiParam param;
    param.name = entry.value("name", "");
    const std::string raw = entry.at("type").get<std::string>();

    std::string_view base;
    std::string suffix;
    if (!split_array_suffix(raw, base, suffix))
        throw AbiParseError("malformed array type '" + raw + "'", index);

    if (base == "tuple") {
        param.type = "tuple" + suffix;
        if (!entry.contains("components"))
            throw AbiParseError("tuple type missing components", index);
        param.components = parse_params(entry.at("components"), index);
    } else {
        const std::string canon = canonical_base(base);
        if (!valid_elementary(canon))
            throw AbiParseError("unknown type '" + raw + "'", index);
        param.type = canon + suffix;
    }
    return param;
}

json param_to_json(const AbiParam& p) {
    json j{{"name", p.name}, {"type", p.type}};
    if (!p.components.empty() || p.type.starts_with("tuple")) {
        json comps = json::array();
        for (const auto& c : p.components) comps.push_back(param_to_json(c));
        j["components"] = comps;
    }
    return j;
}

}  // namespace

Selector Selector::from_hex(std::string_view hex) {
    const Bytes raw = upscan::from_hex(hex);
    if (raw.size() != 4) throw std::invalid_argument("selector must be 4 bytes");
    std::array<std::uint8_t, 4> bytes{};
    std::copy(raw.begin(), raw.end(), bytes.begin());
    return Selector{bytes};
}

Selector Selector::from_calldata(const Bytes& calldata) {
    if (calldata.size() < 4) throw std::invalid_argument("calldata shorter than a selector");
    std::array<std::uint8_t, 4> bytes{};
    std::copy(calldata.begin(), calldata.begin() + 4, bytes.begin());
    return Selector{bytes};
}

std::string Selector::hex() const {
    return to_hex(bytes_.data(), bytes_.size());
}

std::string AbiParam::canonical_type() const {
    if (!type.starts_with("tuple")) return type;
    std::string out = "(";
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i > 0) out += ",";
        out += components[i].canonical_type();
    }
    out += ")";
    out += type.substr(5);  // array suffix, if any
    return out;
}

std::string_view to_string(Mutability m) {
    switch (m) {
        case Mutability::Pure: return "pure";
        case Mutability::View: return "view";
        case Mutability::Payable: return "payable";
        case Mutability::NonPayable: break;
    }
    return "nonpayable";
}

Mutability mutability_from_string(std::string_view s) {
    if (s == "pure") return Mutability::Pure;
    if (s == "view" || s == "constant") return Mutability::View;
    if (s == "payable") return Mutability::Payable;
    if (s == "nonpayable") return Mutability::NonPayable;
    throw AbiParseError("unknown state mutability '" + std::string(s) + "'");
}

std::string AbiFunction::signature() const {
    std::string sig = name + "(";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i > 0) sig += ",";
        sig += inputs[i].canonical_type();
    }
    sig += ")";
    return sig;
}

const AbiFunction* Abi::find_signature(std::string_view signature) const {
    for (const auto& f : functions)
        if (f.signature() == signature) return &f;
    return nullptr;
}

const AbiFunction* Abi::find_selector(const Selector& sel) const {
    for (const auto& f : functions)
        if (selector_of(f) == sel) return &f;
    return nullptr;
}

bool Abi::has_function_name(std::string_view name) const {
    return std::any_of(functions.begin(), functions.end(),
                       [&](const AbiFunction& f) { return f.name == name; });
}

std::string canonicalize_type(std::string_view type) {
    std::string_view base;
    std::string suffix;
    if (!split_array_suffix(type, base, suffix))
        throw AbiParseError("malformed array type '" + std::string(type) + "'");
    const std::string canon = canonical_base(base);
    if (!valid_elementary(canon))
        throw AbiParseError("unknown type '" + std::string(type) + "'");
    return canon + suffix;
}

Abi parse_abi(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw AbiParseError(std::string("malformed ABI JSON: ") + e.what());
    }
    if (!doc.is_array()) throw AbiParseError("ABI document is not a JSON array");

    Abi abi;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& entry = doc[i];
        if (!entry.is_object()) throw AbiParseError("ABI entry is not an object", i);
        // per the ABI spec a missing "type" defaults to "function"
        const std::string kind = entry.value("type", "function");
        if (kind == "fallback") {
            abi.has_fallback = true;
            continue;
        }
        if (kind == "receive") {
            abi.has_receive = true;
            continue;
        }
        if (kind != "function") continue;  // constructor/event/error

        AbiFunction f;
        if (!entry.contains("name")) throw AbiParseError("function entry missing name", i);
        f.name = entry.at("name").get<std::string>();
        f.inputs = parse_params(entry.value("inputs", json::array()), i);
        f.outputs = parse_params(entry.value("outputs", json::array()), i);
        if (entry.contains("stateMutability")) {
            f.mutability = mutability_from_string(entry.at("stateMutability").get<std::string>());
        } else if (entry.value("payable", false)) {
            f.mutability = Mutability::Payable;
        } else if (entry.value("constant", false)) {
            f.mutability = Mutability::View;
        }

        if (!seen.insert(f.signature()).second)
            throw AbiParseError("duplicate signature '" + f.signature() + "'", i);
        abi.functions.push_back(std::move(f));
    }
    return abi;
}

std::string serialize_abi(const Abi& abi, int indent) {
    json doc = json::array();
    for (const auto& f : abi.functions) {
        json entry{{"type", "function"},
                   {"name", f.name},
                   {"stateMutability", std::string(to_string(f.mutability))}};
        json inputs = json::array();
        for (const auto& p : f.inputs) inputs.push_back(param_to_json(p));
        json outputs = json::array();
        for (const auto& p : f.outputs) outputs.push_back(param_to_json(p));
        entry["inputs"] = inputs;
        entry["outputs"] = outputs;
        doc.push_back(entry);
    }
    if (abi.has_fallback) doc.push_back(json{{"type", "fallback"}, {"stateMutability", "payable"}});
    if (abi.has_receive) doc.push_back(json{{"type", "receive"}, {"stateMutability", "payable"}});
    return doc.dump(indent);
}

Selector selector_of(const AbiFunction& f) {
    return selector_of_signature(f.signature());
}

Selector selector_of_signature(std::string_view canonical_signature) {
    const auto digest = keccak256(canonical_signature);
    std::array<std::uint8_t, 4> bytes{};
    std::copy(digest.begin(), digest.begin() + 4, bytes.begin());
    return Selector{bytes};
}

}  // namespace upscan
