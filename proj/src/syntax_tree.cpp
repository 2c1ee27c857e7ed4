// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/syntax_tree.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace upscan {

namespace {

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

std::uint64_t hash_string(const std::string& s) {
    return std::hash<std::string>{}(s);
}

}  // namespace

NodeId SyntaxTree::add_root(std::string kind, std::string value, SourceSpan span) {
    if (root_ != kNoNode) throw std::logic_error("tree already has a root");
    Node node;
    node.kind = std::move(kind);
    node.value = std::move(value);
    node.span = span;
    nodes_.push_back(std::move(node));
    root_ = 0;
    return root_;
}

NodeId SyntaxTree::add_child(NodeId parent, std::string kind, std::string value,
                             SourceSpan span) {
    Node node;
    node.kind = std::move(kind);
    node.value = std::move(value);
    node.parent = parent;
    node.span = span;
    const NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(std::move(node));
    nodes_[parent].children.push_back(id);
    return id;
}

void SyntaxTree::finalize() {
    for (const NodeId id : post_order()) {
        Node& n = nodes_[id];
        n.height = 1;
        n.descendants = 0;
        std::uint64_t h = hash_combine(hash_string(n.kind), hash_string(n.value));
        for (const NodeId child : n.children) {
            const Node& c = nodes_[child];
            n.height = std::max(n.height, c.height + 1);
            n.descendants += c.descendants + 1;
            h = hash_combine(h, c.subtree_hash);
        }
        n.subtree_hash = h;
    }
}

std::vector<NodeId> SyntaxTree::post_order() const {
    std::vector<NodeId> order;
    if (root_ == kNoNode) return order;
    order.reserve(nodes_.size());
    // two-stack iterative post-order
    std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
    while (!stack.empty()) {
        auto& [id, next_child] = stack.back();
        const Node& n = nodes_[id];
        if (next_child < n.children.size()) {
            const NodeId child = n.children[next_child++];
            stack.push_back({child, 0});
        } else {
            order.push_back(id);
            stack.pop_back();
        }
    }
    return order;
}

std::vector<NodeId> SyntaxTree::breadth_first() const {
    std::vector<NodeId> order;
    if (root_ == kNoNode) return order;
    order.push_back(root_);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (const NodeId child : nodes_[order[i]].children) order.push_back(child);
    return order;
}

std::vector<NodeId> SyntaxTree::descendants_of(NodeId id) const {
    std::vector<NodeId> out;
    std::vector<NodeId> stack(nodes_[id].children.rbegin(), nodes_[id].children.rend());
    while (!stack.empty()) {
        const NodeId cur = stack.back();
        stack.pop_back();
        out.push_back(cur);
        const auto& children = nodes_[cur].children;
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::uint32_t SyntaxTree::child_index(NodeId id) const {
    const NodeId parent = nodes_[id].parent;
    if (parent == kNoNode) return 0;
    const auto& siblings = nodes_[parent].children;
    const auto it = std::find(siblings.begin(), siblings.end(), id);
    return static_cast<std::uint32_t>(it - siblings.begin());
}

bool SyntaxTree::isomorphic(const SyntaxTree& a, NodeId a_node, const SyntaxTree& b,
                            NodeId b_node) {
    const Node& na = a.node(a_node);
    const Node& nb = b.node(b_node);
    if (na.kind != nb.kind || na.value != nb.value ||
        na.children.size() != nb.children.size())
        return false;
    for (std::size_t i = 0; i < na.children.size(); ++i)
        if (!isomorphic(a, na.children[i], b, nb.children[i])) return false;
    return true;
}

bool SyntaxTree::isomorphic(const SyntaxTree& a, const SyntaxTree& b) {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    return isomorphic(a, a.root(), b, b.root());
}

std::string SyntaxTree::to_text(NodeId id, int indent) const {
    const Node& n = nodes_[id];
    std::string out(static_cast<std::size_t>(indent) * 2, ' ');
    out += n.kind;
    if (!n.value.empty()) out += ": " + n.value;
    out += "\n";
    for (const NodeId child : n.children) out += to_text(child, indent + 1);
    return out;
}

}  // namespace upscan
