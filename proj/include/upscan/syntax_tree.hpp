// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace upscan {

using NodeId = std::uint32_t;
constexpr NodeId kNoNode = UINT32_MAX;

struct SourceSpan {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;

    bool operator==(const SourceSpan&) const = default;
};

/// Labeled ordered tree over source code. Grammar front-ends build one
/// via add_root/add_child; finalize() derives heights, subtree hashes and
/// descendant counts used by the matcher.
class SyntaxTree {
public:
    struct Node {
        std::string kind;
        std::string value;  // leaf token text or normalized header text
        NodeId parent = kNoNode;
        std::vector<NodeId> children;
        SourceSpan span;
        // derived by finalize()
        std::uint32_t height = 1;       // leaves have height 1
        std::uint32_t descendants = 0;  // strict descendant count
        std::uint64_t subtree_hash = 0;
    };

    NodeId add_root(std::string kind, std::string value = "", SourceSpan span = {});
    NodeId add_child(NodeId parent, std::string kind, std::string value = "",
                     SourceSpan span = {});

    void finalize();

    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }
    NodeId root() const { return root_; }
    const Node& node(NodeId id) const { return nodes_[id]; }
    Node& node_mut(NodeId id) { return nodes_[id]; }

    /// Ids in post-order (children before parents).
    std::vector<NodeId> post_order() const;
    /// Ids in breadth-first order from the root.
    std::vector<NodeId> breadth_first() const;
    /// All strict descendants of `id`, pre-order.
    std::vector<NodeId> descendants_of(NodeId id) const;
    /// Index of `id` within its parent's child list (0 for the root).
    std::uint32_t child_index(NodeId id) const;

    static bool isomorphic(const SyntaxTree& a, NodeId a_node, const SyntaxTree& b, NodeId b_node);
    static bool isomorphic(const SyntaxTree& a, const SyntaxTree& b);

    std::string to_text(NodeId id, int indent = 0) const;  // debug rendering

private:
    std::vector<Node> nodes_;
    NodeId root_ = kNoNode;
};

}  // namespace upscan
