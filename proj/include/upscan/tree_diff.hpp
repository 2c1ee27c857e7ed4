// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "upscan/syntax_tree.hpp"

namespace upscan {

/// Injective partial mapping between old-tree and new-tree nodes.
class NodeMapping {
public:
    NodeMapping(std::size_t old_size, std::size_t new_size)
        : old_to_new_(old_size, kNoNode), new_to_old_(new_size, kNoNode) {}

    void link(NodeId old_node, NodeId new_node) {
        old_to_new_[old_node] = new_node;
        new_to_old_[new_node] = old_node;
    }
    bool has_old(NodeId old_node) const { return old_to_new_[old_node] != kNoNode; }
    bool has_new(NodeId new_node) const { return new_to_old_[new_node] != kNoNode; }
    NodeId to_new(NodeId old_node) const { return old_to_new_[old_node]; }
    NodeId to_old(NodeId new_node) const { return new_to_old_[new_node]; }
    std::size_t size() const;

private:
    std::vector<NodeId> old_to_new_;
    std::vector<NodeId> new_to_old_;
};

struct MatchOptions {
    std::uint32_t min_height = 2;  // smallest subtree the top-down phase anchors on
    double sim_threshold = 0.5;    // container dice threshold for the bottom-up phase
};

/// Greedy top-down matching of isomorphic subtrees of height >= min_height,
/// then bottom-up container matching by descendant-overlap similarity.
NodeMapping match_trees(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                        const MatchOptions& options = {});

enum class EditOp { Insert, Delete, Update, Move };

std::string_view to_string(EditOp op);

/// Reference to a node that exists while a script is being applied: either
/// a surviving old-tree node or a node created by an earlier Insert.
struct NodeRef {
    bool from_new = false;  // false: old-tree id; true: new-tree id (inserted)
    NodeId id = kNoNode;

    bool operator==(const NodeRef&) const = default;
};

struct EditAction {
    EditOp op = EditOp::Insert;
    std::string kind;
    std::string value;       // Insert: node value; Update: replacement value
    std::string prev_value;  // Update only
    NodeRef node;            // Insert: new-tree id; otherwise old-tree id
    std::optional<NodeRef> parent;  // Insert/Move target; nullopt = top level
    std::uint32_t position = 0;     // Insert/Move: child index at apply time
    SourceSpan old_span;
    SourceSpan new_span;
    /// Set when this action's enclosing function definition survives the
    /// edit (exists on both sides); used by the summary convention that
    /// interface edits count as updates of their function.
    bool inside_matched_function = false;

    bool operator==(const EditAction&) const = default;
};

/// Edit script in application order: updates/inserts/moves walking the new
/// tree breadth-first with child alignment, then deletes of unmatched old
/// nodes in post-order. Applying it to `old_tree` yields a tree isomorphic
/// to `new_tree`.
std::vector<EditAction> edit_script(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                                    const NodeMapping& mapping);

/// Convenience: match + script.
std::vector<EditAction> diff_trees(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                                   const MatchOptions& options = {});

/// Replays a script produced by edit_script against a copy of `old_tree`.
/// Throws std::runtime_error if an action is not applicable (bad parent
/// reference, position out of range, deleting a node with children).
SyntaxTree apply_script(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                        const std::vector<EditAction>& script);

}  // namespace upscan
