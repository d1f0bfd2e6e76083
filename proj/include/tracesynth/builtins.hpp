#pragma once

#include "tracesynth/model.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Built-in host function registries, enabled per model via `builtins`.
// ---------------------------------------------------------------------------

namespace builtins {

// --- strings ---------------------------------------------------------------

/// total_len(A): sum of the lengths of all strings in the array.
/// substr(s, offset, length): 0-based offset; the slice must lie within s.
inline std::vector<FunctionDef> strings() {
    std::vector<FunctionDef> out;
    out.push_back({"total_len",
                   {TypeTag::string_array()},
                   TypeTag::nat(),
                   [](std::span<const Value> a) {
                       long long total = 0;
                       for (const auto& s : a[0].as_array())
                           total += static_cast<long long>(s.size());
                       return Value(total);
                   }});
    out.push_back({"substr",
                   {TypeTag::string(), TypeTag::nat(), TypeTag::nat()},
                   TypeTag::string(),
                   [](std::span<const Value> a) {
                       const std::string& s = a[0].as_string();
                       long long off = a[1].as_int(), len = a[2].as_int();
                       if (off < 0 || len < 0 || off + len > static_cast<long long>(s.size()))
                           fail(ErrorKind::IndexOutOfRange,
                                "substr(" + s + ", " + std::to_string(off) + ", " +
                                    std::to_string(len) + ")");
                       return Value(s.substr(static_cast<size_t>(off), static_cast<size_t>(len)));
                   }});
    return out;
}

// --- trees -----------------------------------------------------------------

namespace tree_detail {

inline const TreeValue::Node& node_of(const Value& v) {
    const NodeRef& n = v.as_node();
    if (!n.tree) fail(ErrorKind::InvalidNode, "node value carries no tree");
    return n.tree->at(n.id);
}

inline NodeRef ref(const NodeRef& base, int id) { return NodeRef{base.tree, id}; }

/// Children of `v` whose induced subtrees have size exactly k, in child order.
inline std::vector<int> block(const NodeRef& v, long long k) {
    std::vector<int> out;
    for (int c : node_of(Value(v)).children)
        if (v.tree->at(c).size == k) out.push_back(c);
    return out;
}

/// Multiset comparison: sort ascending, compare lexicographically.
inline int compare_multisets(std::vector<long long> a, std::vector<long long> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

/// Three-way "first relation" comparison of the subtrees rooted at two nodes:
/// by size, then child count, then the multiset of child subtree sizes.
inline int cmp1(const NodeRef& s, const NodeRef& t) {
    const auto& sn = node_of(Value(s));
    const auto& tn = node_of(Value(t));
    if (sn.size != tn.size) return sn.size < tn.size ? -1 : 1;
    if (sn.children.size() != tn.children.size())
        return sn.children.size() < tn.children.size() ? -1 : 1;
    std::vector<long long> a, b;
    for (int c : sn.children) a.push_back(s.tree->at(c).size);
    for (int c : tn.children) b.push_back(t.tree->at(c).size);
    return compare_multisets(a, b);
}

}  // namespace tree_detail

/// Tree queries: parent, first child, next sibling, subtree size, the block
/// primitives B(k), a root test, and the three-way cmp1 comparison. Node
/// values carry their tree, so every query works from the value alone.
inline std::vector<FunctionDef> trees() {
    using namespace tree_detail;
    auto node_arg = [](const Value& v) -> const NodeRef& { return v.as_node(); };
    std::vector<FunctionDef> out;
    TypeTag node = TypeTag::node(), nat = TypeTag::nat(), boolean = TypeTag::boolean();
    TypeTag rel = TypeTag::enumeration({"lt", "eq", "gt"});

    out.push_back({"parent", {node}, node, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       int p = node_of(a[0]).parent;
                       if (p < 0) fail(ErrorKind::InvalidNode,
                                       "node " + std::to_string(n.id) + " has no parent");
                       return Value(ref(n, p));
                   }});
    out.push_back({"first_child", {node}, node, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       const auto& children = node_of(a[0]).children;
                       if (children.empty())
                           fail(ErrorKind::InvalidNode,
                                "node " + std::to_string(n.id) + " has no children");
                       return Value(ref(n, children.front()));
                   }});
    out.push_back({"next_sibling", {node}, node, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       const auto& me = node_of(a[0]);
                       if (me.parent < 0)
                           fail(ErrorKind::InvalidNode, "root has no next sibling");
                       const auto& sibs = n.tree->at(me.parent).children;
                       auto it = std::find(sibs.begin(), sibs.end(), n.id);
                       if (it == sibs.end() || std::next(it) == sibs.end())
                           fail(ErrorKind::InvalidNode,
                                "node " + std::to_string(n.id) + " has no next sibling");
                       return Value(ref(n, *std::next(it)));
                   }});
    out.push_back({"subtree_size", {node}, nat, [=](std::span<const Value> a) {
                       return Value(static_cast<long long>(node_of(a[0]).size));
                   }});
    out.push_back({"num_children", {node}, nat, [=](std::span<const Value> a) {
                       return Value(static_cast<long long>(node_of(a[0]).children.size()));
                   }});
    out.push_back({"is_root", {node}, boolean, [=](std::span<const Value> a) {
                       return Value(node_of(a[0]).parent < 0);
                   }});
    // smallest block size of the node's children strictly larger than k
    out.push_back({"next_block_size", {node, nat}, nat, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       long long k = a[1].as_int(), best = -1;
                       for (int c : node_of(a[0]).children) {
                           long long sz = n.tree->at(c).size;
                           if (sz > k && (best < 0 || sz < best)) best = sz;
                       }
                       if (best < 0)
                           fail(ErrorKind::InvalidNode, "node " + std::to_string(n.id) +
                                                            " has no block larger than " +
                                                            std::to_string(k));
                       return Value(best);
                   }});
    out.push_back({"has_next_block", {node, nat}, boolean, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       long long k = a[1].as_int();
                       for (int c : node_of(a[0]).children)
                           if (n.tree->at(c).size > k) return Value(true);
                       return Value(false);
                   }});
    out.push_back({"block_card", {node, nat}, nat, [=](std::span<const Value> a) {
                       return Value(static_cast<long long>(
                           block(node_arg(a[0]), a[1].as_int()).size()));
                   }});
    out.push_back({"block_first", {node, nat}, node, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       auto b = block(n, a[1].as_int());
                       if (b.empty())
                           fail(ErrorKind::InvalidNode, "node " + std::to_string(n.id) +
                                                            " has no block of size " +
                                                            std::to_string(a[1].as_int()));
                       return Value(ref(n, b.front()));
                   }});
    // next node after this one inside its own block (same parent, same size)
    out.push_back({"block_next", {node}, node, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       const auto& me = node_of(a[0]);
                       if (me.parent < 0) fail(ErrorKind::InvalidNode, "root is not in a block");
                       auto b = block(ref(n, me.parent), me.size);
                       auto it = std::find(b.begin(), b.end(), n.id);
                       if (it == b.end() || std::next(it) == b.end())
                           fail(ErrorKind::InvalidNode,
                                "node " + std::to_string(n.id) + " is last in its block");
                       return Value(ref(n, *std::next(it)));
                   }});
    out.push_back({"is_block_last", {node}, boolean, [=](std::span<const Value> a) {
                       const NodeRef& n = node_arg(a[0]);
                       const auto& me = node_of(a[0]);
                       if (me.parent < 0) fail(ErrorKind::InvalidNode, "root is not in a block");
                       auto b = block(ref(n, me.parent), me.size);
                       return Value(!b.empty() && b.back() == n.id);
                   }});
    out.push_back({"cmp1", {node, node}, rel, [=](std::span<const Value> a) {
                       int c = cmp1(node_arg(a[0]), node_arg(a[1]));
                       return Value(EnumValue{c < 0 ? "lt" : c > 0 ? "gt" : "eq"});
                   }});
    return out;
}

// --- stack6 ----------------------------------------------------------------

/// Stack of six-value rows (h, sgt, seq, tgt, teq, f); all columns push and
/// pop together.
inline std::vector<FunctionDef> stack6() {
    TypeTag nat = TypeTag::nat(), stack = TypeTag::stack();
    TypeTag flag = TypeTag::enumeration({"S", "T"});
    auto top = [](const Value& v) -> const std::vector<Value>& {
        const StackValue& s = v.as_stack();
        if (s.rows.empty()) fail(ErrorKind::IndexOutOfRange, "stack is empty");
        return s.rows.back();
    };
    std::vector<FunctionDef> out;
    out.push_back({"empty_stack", {}, stack, [](std::span<const Value>) {
                       return Value(StackValue{});
                   }});
    out.push_back({"push6",
                   {stack, nat, nat, nat, nat, nat, flag},
                   stack,
                   [](std::span<const Value> a) {
                       StackValue s = a[0].as_stack();
                       s.rows.push_back({a[1], a[2], a[3], a[4], a[5], a[6]});
                       return Value(std::move(s));
                   }});
    out.push_back({"pop", {stack}, stack, [top](std::span<const Value> a) {
                       StackValue s = a[0].as_stack();
                       top(a[0]);  // emptiness check
                       s.rows.pop_back();
                       return Value(std::move(s));
                   }});
    const char* names[] = {"stk_h", "stk_sgt", "stk_seq", "stk_tgt", "stk_teq"};
    for (int i = 0; i < 5; ++i) {
        out.push_back({names[i], {stack}, nat, [top, i](std::span<const Value> a) {
                           return top(a[0]).at(static_cast<size_t>(i));
                       }});
    }
    out.push_back({"stk_f", {stack}, flag, [top](std::span<const Value> a) {
                       return top(a[0]).at(5);
                   }});
    out.push_back({"b2n", {TypeTag::boolean()}, nat, [](std::span<const Value> a) {
                       return Value(a[0].as_bool() ? 1ll : 0ll);
                   }});
    return out;
}

}  // namespace builtins

/// Enables a named registry on a model. Known sets: strings, trees, stack6.
inline void enable_builtins(Model& model, const std::string& set_name) {
    std::vector<FunctionDef> fns;
    if (set_name == "strings")
        fns = builtins::strings();
    else if (set_name == "trees")
        fns = builtins::trees();
    else if (set_name == "stack6")
        fns = builtins::stack6();
    else
        fail(ErrorKind::UnknownName, "unknown builtin set " + set_name);
    for (auto& f : fns) model.functions.add(std::move(f));
    if (std::find(model.builtin_sets.begin(), model.builtin_sets.end(), set_name) ==
        model.builtin_sets.end())
        model.builtin_sets.push_back(set_name);
}

// ---------------------------------------------------------------------------
// Tree construction helpers
// ---------------------------------------------------------------------------

namespace detail {

inline int fill_sizes(TreeValue& t, int id) {
    auto& n = t.nodes.at(id);
    n.size = 1;
    for (int c : n.children) n.size += fill_sizes(t, c);
    return n.size;
}

}  // namespace detail

/// Builds a tree from (id, parent) pairs; parent -1 marks the root. Children
/// keep insertion order.
inline std::shared_ptr<const TreeValue> make_tree(
    const std::vector<std::pair<int, int>>& id_parent) {
    auto t = std::make_shared<TreeValue>();
    for (auto [id, parent] : id_parent) {
        TreeValue::Node n;
        n.id = id;
        n.parent = parent;
        if (!t->nodes.emplace(id, n).second)
            fail(ErrorKind::Format, "duplicate node id " + std::to_string(id));
        if (parent < 0) t->root = id;
    }
    for (auto [id, parent] : id_parent)
        if (parent >= 0) t->nodes.at(parent).children.push_back(id);
    detail::fill_sizes(*t, t->root);
    return t;
}

inline NodeRef root_ref(std::shared_ptr<const TreeValue> tree) {
    int r = tree->root;
    return NodeRef{std::move(tree), r};
}

}  // namespace tracesynth
