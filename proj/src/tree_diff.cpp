// upscan: proxy-upgrade analysis toolkit
// Copyright 2026 The upscan Authors.
// Licensed under the Apache License, Version 2.0.

#include "upscan/tree_diff.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace upscan {

std::string_view to_string(EditOp op) {
    switch (op) {
        case EditOp::Insert: return "insert";
        case EditOp::Delete: return "delete";
        case EditOp::Update: return "update";
        case EditOp::Move: return "move";
    }
    return "unknown";
}

std::size_t NodeMapping::size() const {
    return static_cast<std::size_t>(
        std::count_if(old_to_new_.begin(), old_to_new_.end(),
                      [](NodeId id) { return id != kNoNode; }));
}

namespace {

// Pre-order interval per node for O(1) ancestor/descendant tests.
struct PreOrderIndex {
    std::vector<std::uint32_t> begin;
    std::vector<std::uint32_t> end;

    explicit PreOrderIndex(const SyntaxTree& tree)
        : begin(tree.size(), 0), end(tree.size(), 0) {
        if (tree.empty()) return;
        std::uint32_t counter = 0;
        std::vector<NodeId> stack{tree.root()};
        std::vector<NodeId> order;
        while (!stack.empty()) {
            const NodeId id = stack.back();
            stack.pop_back();
            begin[id] = counter++;
            order.push_back(id);
            const auto& children = tree.node(id).children;
            for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId id = *it;
            end[id] = begin[id] + 1;
            for (const NodeId child : tree.node(id).children) end[id] = std::max(end[id], end[child]);
        }
    }

    bool strictly_under(NodeId node, NodeId ancestor) const {
        return begin[node] > begin[ancestor] && begin[node] < end[ancestor];
    }
};

double dice(const SyntaxTree& old_tree, NodeId old_node, const SyntaxTree& new_tree,
            NodeId new_node, const NodeMapping& mapping, const PreOrderIndex& old_pre,
            const PreOrderIndex& new_pre) {
    const auto& on = old_tree.node(old_node);
    const auto& nn = new_tree.node(new_node);
    if (on.descendants == 0 && nn.descendants == 0) return 0.0;
    std::size_t common = 0;
    for (const NodeId d : old_tree.descendants_of(old_node)) {
        const NodeId partner = mapping.has_old(d) ? mapping.to_new(d) : kNoNode;
        if (partner != kNoNode && new_pre.strictly_under(partner, new_node)) ++common;
    }
    (void)old_pre;
    return 2.0 * static_cast<double>(common) /
           (static_cast<double>(on.descendants) + static_cast<double>(nn.descendants));
}

// Links every node of two isomorphic subtrees pairwise.
void link_subtrees(const SyntaxTree& old_tree, NodeId old_node, const SyntaxTree& new_tree,
                   NodeId new_node, NodeMapping& mapping) {
    mapping.link(old_node, new_node);
    const auto& oc = old_tree.node(old_node).children;
    const auto& nc = new_tree.node(new_node).children;
    for (std::size_t i = 0; i < oc.size(); ++i)
        link_subtrees(old_tree, oc[i], new_tree, nc[i], mapping);
}

void top_down_phase(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                    const MatchOptions& options, const PreOrderIndex& old_pre,
                    const PreOrderIndex& new_pre, NodeMapping& mapping) {
    // height-keyed open lists, ids in document order for determinism
    std::map<std::uint32_t, std::vector<NodeId>, std::greater<>> open_old, open_new;
    open_old[old_tree.node(old_tree.root()).height].push_back(old_tree.root());
    open_new[new_tree.node(new_tree.root()).height].push_back(new_tree.root());

    const auto open_children = [](const SyntaxTree& tree, NodeId id, auto& open) {
        for (const NodeId child : tree.node(id).children)
            open[tree.node(child).height].push_back(child);
    };

    while (!open_old.empty() && !open_new.empty()) {
        const std::uint32_t h_old = open_old.begin()->first;
        const std::uint32_t h_new = open_new.begin()->first;
        const std::uint32_t h = std::min(h_old, h_new);
        if (h < options.min_height) break;

        if (h_old > h_new) {
            auto nodes = std::move(open_old.begin()->second);
            open_old.erase(open_old.begin());
            for (const NodeId id : nodes) open_children(old_tree, id, open_old);
            continue;
        }
        if (h_new > h_old) {
            auto nodes = std::move(open_new.begin()->second);
            open_new.erase(open_new.begin());
            for (const NodeId id : nodes) open_children(new_tree, id, open_new);
            continue;
        }

        auto olds = std::move(open_old.begin()->second);
        auto news = std::move(open_new.begin()->second);
        open_old.erase(open_old.begin());
        open_new.erase(open_new.begin());

        std::unordered_map<std::uint64_t, std::vector<NodeId>> old_by_hash, new_by_hash;
        for (const NodeId id : olds) old_by_hash[old_tree.node(id).subtree_hash].push_back(id);
        for (const NodeId id : news) new_by_hash[new_tree.node(id).subtree_hash].push_back(id);

        std::set<NodeId> consumed_old, consumed_new;
        // deterministic iteration: walk olds in document order
        std::set<std::uint64_t> handled;
        for (const NodeId anchor : olds) {
            const std::uint64_t hash = old_tree.node(anchor).subtree_hash;
            if (!handled.insert(hash).second) continue;
            const auto new_it = new_by_hash.find(hash);
            if (new_it == new_by_hash.end()) continue;
            const auto& group_old = old_by_hash[hash];
            const auto& group_new = new_it->second;

            if (group_old.size() == 1 && group_new.size() == 1) {
                if (SyntaxTree::isomorphic(old_tree, group_old[0], new_tree, group_new[0])) {
                    link_subtrees(old_tree, group_old[0], new_tree, group_new[0], mapping);
                    consumed_old.insert(group_old[0]);
                    consumed_new.insert(group_new[0]);
                }
                continue;
            }

            // ambiguous anchors: greedy by parent similarity, then position
            struct Candidate {
                double score;
                std::uint32_t pos_gap;
                NodeId o, n;
            };
            std::vector<Candidate> candidates;
            for (const NodeId o : group_old) {
                for (const NodeId n : group_new) {
                    if (!SyntaxTree::isomorphic(old_tree, o, new_tree, n)) continue;
                    const NodeId op = old_tree.node(o).parent;
                    const NodeId np = new_tree.node(n).parent;
                    double score = 0.0;
                    if (op != kNoNode && np != kNoNode) {
                        if (old_tree.node(op).kind == new_tree.node(np).kind) score += 0.5;
                        score += dice(old_tree, op, new_tree, np, mapping, old_pre, new_pre);
                    }
                    const std::uint32_t pa = old_tree.child_index(o);
                    const std::uint32_t pb = new_tree.child_index(n);
                    candidates.push_back({score, pa > pb ? pa - pb : pb - pa, o, n});
                }
            }
            std::stable_sort(candidates.begin(), candidates.end(),
                             [](const Candidate& a, const Candidate& b) {
                                 if (a.score != b.score) return a.score > b.score;
                                 if (a.pos_gap != b.pos_gap) return a.pos_gap < b.pos_gap;
                                 if (a.o != b.o) return a.o < b.o;
                                 return a.n < b.n;
                             });
            for (const auto& c : candidates) {
                if (consumed_old.contains(c.o) || consumed_new.contains(c.n)) continue;
                link_subtrees(old_tree, c.o, new_tree, c.n, mapping);
                consumed_old.insert(c.o);
                consumed_new.insert(c.n);
            }
        }

        for (const NodeId id : olds)
            if (!consumed_old.contains(id)) open_children(old_tree, id, open_old);
        for (const NodeId id : news)
            if (!consumed_new.contains(id)) open_children(new_tree, id, open_new);
    }
}

void bottom_up_phase(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                     const MatchOptions& options, const PreOrderIndex& old_pre,
                     const PreOrderIndex& new_pre, NodeMapping& mapping) {
    for (const NodeId old_node : old_tree.post_order()) {
        if (mapping.has_old(old_node)) continue;
        const auto& on = old_tree.node(old_node);
        const bool is_root = old_node == old_tree.root();

        // candidate new containers: unmatched ancestors (of partners of our
        // matched descendants) with the same kind
        std::vector<NodeId> candidates;
        std::unordered_set<NodeId> seen;
        for (const NodeId d : old_tree.descendants_of(old_node)) {
            if (!mapping.has_old(d)) continue;
            NodeId cur = new_tree.node(mapping.to_new(d)).parent;
            while (cur != kNoNode) {
                if (seen.insert(cur).second) {
                    if (!mapping.has_new(cur) && new_tree.node(cur).kind == on.kind)
                        candidates.push_back(cur);
                }
                cur = new_tree.node(cur).parent;
            }
        }
        if (candidates.empty() && is_root && !mapping.has_new(new_tree.root()) &&
            new_tree.node(new_tree.root()).kind == on.kind)
            candidates.push_back(new_tree.root());
        if (candidates.empty()) continue;

        double best_score = -1.0;
        NodeId best = kNoNode;
        for (const NodeId n : candidates) {
            const double score = dice(old_tree, old_node, new_tree, n, mapping, old_pre, new_pre);
            if (score > best_score || (score == best_score && (best == kNoNode || n < best))) {
                best_score = score;
                best = n;
            }
        }
        if (best == kNoNode || best_score < options.sim_threshold) continue;
        mapping.link(old_node, best);

        // cheap recovery inside the matched container: pair leftover direct
        // children that agree on kind and value, in order
        const auto& nc = new_tree.node(best).children;
        std::vector<NodeId> free_new;
        for (const NodeId c : nc)
            if (!mapping.has_new(c)) free_new.push_back(c);
        for (const NodeId oc : on.children) {
            if (mapping.has_old(oc)) continue;
            const auto& ocn = old_tree.node(oc);
            for (std::size_t i = 0; i < free_new.size(); ++i) {
                const auto& ncn = new_tree.node(free_new[i]);
                if (ocn.kind == ncn.kind && ocn.value == ncn.value) {
                    mapping.link(oc, free_new[i]);
                    free_new.erase(free_new.begin() + static_cast<std::ptrdiff_t>(i));
                    break;
                }
            }
        }
        // then unique-kind pairs
        for (const NodeId oc : on.children) {
            if (mapping.has_old(oc)) continue;
            const auto& ocn = old_tree.node(oc);
            NodeId unique = kNoNode;
            bool multiple = false;
            for (const NodeId n : free_new) {
                if (new_tree.node(n).kind == ocn.kind) {
                    if (unique != kNoNode) { multiple = true; break; }
                    unique = n;
                }
            }
            bool old_unique = true;
            for (const NodeId oc2 : on.children)
                if (oc2 != oc && !mapping.has_old(oc2) && old_tree.node(oc2).kind == ocn.kind)
                    old_unique = false;
            if (!multiple && old_unique && unique != kNoNode) {
                mapping.link(oc, unique);
                free_new.erase(std::find(free_new.begin(), free_new.end(), unique));
            }
        }
    }
}

}  // namespace

NodeMapping match_trees(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                        const MatchOptions& options) {
    NodeMapping mapping(old_tree.size(), new_tree.size());
    if (old_tree.empty() || new_tree.empty()) return mapping;
    const PreOrderIndex old_pre(old_tree), new_pre(new_tree);
    top_down_phase(old_tree, new_tree, options, old_pre, new_pre, mapping);
    bottom_up_phase(old_tree, new_tree, options, old_pre, new_pre, mapping);
    return mapping;
}

namespace {

/// Mutable working copy shared by script generation and replay.
struct WorkingTree {
    struct WNode {
        std::string kind;
        std::string value;
        int parent = -1;  // -1: top level
        std::vector<int> children;
        NodeRef origin;
        bool alive = true;
    };

    std::vector<WNode> nodes;
    std::vector<int> roots;
    std::unordered_map<NodeId, int> from_old;
    std::unordered_map<NodeId, int> from_new;

    explicit WorkingTree(const SyntaxTree& old_tree) {
        nodes.reserve(old_tree.size());
        for (NodeId id = 0; id < old_tree.size(); ++id) {
            const auto& n = old_tree.node(id);
            WNode w;
            w.kind = n.kind;
            w.value = n.value;
            w.parent = n.parent == kNoNode ? -1 : static_cast<int>(n.parent);
            for (const NodeId c : n.children) w.children.push_back(static_cast<int>(c));
            w.origin = {false, id};
            nodes.push_back(std::move(w));
            from_old[id] = static_cast<int>(id);
        }
        if (!old_tree.empty()) roots.push_back(static_cast<int>(old_tree.root()));
    }

    int resolve(const NodeRef& ref) const {
        const auto& map = ref.from_new ? from_new : from_old;
        const auto it = map.find(ref.id);
        if (it == map.end()) throw std::runtime_error("edit script references an unknown node");
        return it->second;
    }

    std::vector<int>& sibling_list(int parent) { return parent < 0 ? roots : nodes[parent].children; }

    void attach(int id, int parent, std::uint32_t position) {
        auto& siblings = sibling_list(parent);
        const auto pos = std::min<std::size_t>(position, siblings.size());
        siblings.insert(siblings.begin() + static_cast<std::ptrdiff_t>(pos), id);
        nodes[id].parent = parent;
    }

    void detach(int id) {
        auto& siblings = sibling_list(nodes[id].parent);
        siblings.erase(std::find(siblings.begin(), siblings.end(), id));
        nodes[id].parent = -1;
    }

    int insert(const NodeRef& origin, std::string kind, std::string value, int parent,
               std::uint32_t position) {
        WNode w;
        w.kind = std::move(kind);
        w.value = std::move(value);
        w.origin = origin;
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(std::move(w));
        attach(id, parent, position);
        if (origin.from_new) from_new[origin.id] = id;
        return id;
    }

    void remove_leaf(int id) {
        if (!nodes[id].children.empty())
            throw std::runtime_error("delete of a node that still has children");
        detach(id);
        nodes[id].alive = false;
    }

    SyntaxTree to_tree() const {
        if (roots.size() != 1)
            throw std::runtime_error("script application did not yield a single root");
        SyntaxTree tree;
        const auto build = [&](auto&& self, int wid, NodeId parent) -> void {
            const WNode& w = nodes[wid];
            NodeId id;
            if (parent == kNoNode)
                id = tree.add_root(w.kind, w.value);
            else
                id = tree.add_child(parent, w.kind, w.value);
            for (const int c : w.children) self(self, c, id);
        };
        build(build, roots[0], kNoNode);
        tree.finalize();
        return tree;
    }
};

NodeId enclosing_function(const SyntaxTree& tree, NodeId id) {
    NodeId cur = tree.node(id).parent;
    while (cur != kNoNode) {
        if (tree.node(cur).kind == "function_definition") return cur;
        cur = tree.node(cur).parent;
    }
    return kNoNode;
}

bool inside_matched_function_old(const SyntaxTree& tree, NodeId id, const NodeMapping& mapping) {
    const NodeId fn = enclosing_function(tree, id);
    return fn != kNoNode && mapping.has_old(fn);
}

bool inside_matched_function_new(const SyntaxTree& tree, NodeId id, const NodeMapping& mapping) {
    const NodeId fn = enclosing_function(tree, id);
    return fn != kNoNode && mapping.has_new(fn);
}

}  // namespace

std::vector<EditAction> edit_script(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                                    const NodeMapping& mapping) {
    std::vector<EditAction> script;
    if (new_tree.empty()) return script;

    WorkingTree work(old_tree);
    // working partner of each new-tree node
    std::vector<int> wpart(new_tree.size(), -1);
    for (NodeId n = 0; n < new_tree.size(); ++n)
        if (mapping.has_new(n)) wpart[n] = work.from_old.at(mapping.to_old(n));

    std::unordered_set<NodeId> dst_in_order;

    // Position for a pending insert/move of new node x: right after the
    // working partner of its nearest already-settled left sibling.
    const auto find_pos = [&](NodeId x) -> std::uint32_t {
        const NodeId y = new_tree.node(x).parent;
        if (y == kNoNode) return static_cast<std::uint32_t>(work.roots.size());
        const auto& siblings = new_tree.node(y).children;
        NodeId settled = kNoNode;
        for (const NodeId s : siblings) {
            if (s == x) break;
            if (dst_in_order.contains(s)) settled = s;
        }
        if (settled == kNoNode) return 0;
        const int u = wpart[settled];
        const auto& wsib = work.sibling_list(work.nodes[u].parent);
        const auto it = std::find(wsib.begin(), wsib.end(), u);
        return static_cast<std::uint32_t>(it - wsib.begin()) + 1;
    };

    const auto align_children = [&](int w, NodeId x) {
        const auto& new_children = new_tree.node(x).children;
        // S1: working children of w whose partners are children of x
        std::vector<int> s1;
        for (const int c : work.nodes[w].children) {
            const NodeRef origin = work.nodes[c].origin;
            if (origin.from_new) continue;  // inserted nodes are already in place
            if (!mapping.has_old(origin.id)) continue;
            const NodeId partner = mapping.to_new(origin.id);
            if (new_tree.node(partner).parent == x) s1.push_back(c);
        }
        // S2: children of x whose partners currently sit under w
        std::vector<NodeId> s2;
        for (const NodeId n : new_children) {
            if (wpart[n] < 0) continue;
            if (work.nodes[wpart[n]].parent == w) s2.push_back(n);
        }
        // LCS over the matched pairs
        const std::size_t n1 = s1.size(), n2 = s2.size();
        std::vector<std::vector<std::uint32_t>> lcs(n1 + 1,
                                                    std::vector<std::uint32_t>(n2 + 1, 0));
        for (std::size_t i = n1; i-- > 0;) {
            for (std::size_t j = n2; j-- > 0;) {
                if (wpart[s2[j]] == s1[i])
                    lcs[i][j] = lcs[i + 1][j + 1] + 1;
                else
                    lcs[i][j] = std::max(lcs[i + 1][j], lcs[i][j + 1]);
            }
        }
        std::set<int> stable;
        for (std::size_t i = 0, j = 0; i < n1 && j < n2;) {
            if (wpart[s2[j]] == s1[i]) {
                stable.insert(s1[i]);
                dst_in_order.insert(s2[j]);
                ++i, ++j;
            } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
                ++i;
            } else {
                ++j;
            }
        }
        for (const NodeId b : s2) {
            const int a = wpart[b];
            if (stable.contains(a)) continue;
            const std::uint32_t k = find_pos(b);
            EditAction action;
            action.op = EditOp::Move;
            action.kind = work.nodes[a].kind;
            action.value = work.nodes[a].value;
            action.node = work.nodes[a].origin;
            action.parent = work.nodes[w].origin;
            action.position = k;
            if (!action.node.from_new) action.old_span = old_tree.node(action.node.id).span;
            action.new_span = new_tree.node(b).span;
            action.inside_matched_function =
                inside_matched_function_new(new_tree, b, mapping) ||
                (!action.node.from_new &&
                 inside_matched_function_old(old_tree, action.node.id, mapping));
            script.push_back(std::move(action));
            work.detach(a);
            work.attach(a, w, k);
            dst_in_order.insert(b);
        }
    };

    for (const NodeId x : new_tree.breadth_first()) {
        const NodeId y = new_tree.node(x).parent;
        int w = wpart[x];
        if (w < 0) {
            // insert
            const int z = y == kNoNode ? -1 : wpart[y];
            const std::uint32_t k = find_pos(x);
            const auto& xn = new_tree.node(x);
            EditAction action;
            action.op = EditOp::Insert;
            action.kind = xn.kind;
            action.value = xn.value;
            action.node = {true, x};
            if (z >= 0) action.parent = work.nodes[z].origin;
            action.position = k;
            action.new_span = xn.span;
            action.inside_matched_function = inside_matched_function_new(new_tree, x, mapping);
            script.push_back(std::move(action));
            w = work.insert({true, x}, xn.kind, xn.value, z, k);
            wpart[x] = w;
            dst_in_order.insert(x);
        } else {
            const auto& xn = new_tree.node(x);
            const int expected_parent = y == kNoNode ? -1 : wpart[y];
            if (work.nodes[w].parent != expected_parent) {
                const std::uint32_t k = find_pos(x);
                EditAction action;
                action.op = EditOp::Move;
                action.kind = work.nodes[w].kind;
                action.value = work.nodes[w].value;
                action.node = work.nodes[w].origin;
                if (expected_parent >= 0) action.parent = work.nodes[expected_parent].origin;
                action.position = k;
                if (!action.node.from_new) action.old_span = old_tree.node(action.node.id).span;
                action.new_span = xn.span;
                action.inside_matched_function =
                    inside_matched_function_new(new_tree, x, mapping) ||
                    (!action.node.from_new &&
                     inside_matched_function_old(old_tree, action.node.id, mapping));
                script.push_back(std::move(action));
                work.detach(w);
                work.attach(w, expected_parent, k);
                dst_in_order.insert(x);
            }
            if (work.nodes[w].value != xn.value) {
                EditAction action;
                action.op = EditOp::Update;
                action.kind = work.nodes[w].kind;
                action.value = xn.value;
                action.prev_value = work.nodes[w].value;
                action.node = work.nodes[w].origin;
                if (!action.node.from_new) action.old_span = old_tree.node(action.node.id).span;
                action.new_span = xn.span;
                action.inside_matched_function = inside_matched_function_new(new_tree, x, mapping);
                script.push_back(std::move(action));
                work.nodes[w].value = xn.value;
            }
        }
        align_children(w, x);
    }

    // deletes, children before parents
    for (const NodeId o : old_tree.post_order()) {
        if (mapping.has_old(o)) continue;
        EditAction action;
        action.op = EditOp::Delete;
        action.kind = old_tree.node(o).kind;
        action.value = old_tree.node(o).value;
        action.node = {false, o};
        action.old_span = old_tree.node(o).span;
        action.inside_matched_function = inside_matched_function_old(old_tree, o, mapping);
        script.push_back(std::move(action));
        work.remove_leaf(work.from_old.at(o));
    }

    return script;
}

std::vector<EditAction> diff_trees(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                                   const MatchOptions& options) {
    const NodeMapping mapping = match_trees(old_tree, new_tree, options);
    return edit_script(old_tree, new_tree, mapping);
}

SyntaxTree apply_script(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                        const std::vector<EditAction>& script) {
    (void)new_tree;  // scripts are self-contained; the new tree is not consulted
    WorkingTree work(old_tree);
    for (const auto& action : script) {
        switch (action.op) {
            case EditOp::Insert: {
                const int parent = action.parent ? work.resolve(*action.parent) : -1;
                work.insert(action.node, action.kind, action.value, parent, action.position);
                break;
            }
            case EditOp::Update: {
                work.nodes[work.resolve(action.node)].value = action.value;
                break;
            }
            case EditOp::Move: {
                const int id = work.resolve(action.node);
                const int parent = action.parent ? work.resolve(*action.parent) : -1;
                work.detach(id);
                work.attach(id, parent, action.position);
                break;
            }
            case EditOp::Delete: {
                work.remove_leaf(work.resolve(action.node));
                break;
            }
        }
    }
    return work.to_tree();
}

}  // namespace upscan
