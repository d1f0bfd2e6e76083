#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tracesynth {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
    UndefinedRead,
    IndexOutOfRange,
    TypeMismatch,
    InvalidNode,
    UnknownName,
    TooShort,
    InvalidColoring,
    Inconsistent,
    UnknownFixture,
    Format,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::UndefinedRead: return "UndefinedRead";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::TypeMismatch: return "TypeMismatch";
        case ErrorKind::InvalidNode: return "InvalidNode";
        case ErrorKind::UnknownName: return "UnknownName";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::InvalidColoring: return "InvalidColoring";
        case ErrorKind::Inconsistent: return "Inconsistent";
        case ErrorKind::UnknownFixture: return "UnknownFixture";
        case ErrorKind::Format: return "Format";
    }
    return "?";
}

/// Evaluation and domain error. Carries a kind so callers can turn specific
/// failures into report entries instead of aborting.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Type of a variable. Every type denotes a countable set of values.
struct TypeTag {
    enum class Kind { Int, Nat, Bool, String, StringArray, Enum, Node, Stack };
    Kind kind = Kind::Int;
    std::optional<long long> floor;   // saturation floor; Nat behaves as floor 0
    std::vector<std::string> labels;  // Enum only; non-empty, duplicate-free

    static TypeTag intty() { return {Kind::Int, {}, {}}; }
    static TypeTag intty(long long floor_value) { return {Kind::Int, floor_value, {}}; }
    static TypeTag nat() { return {Kind::Nat, {}, {}}; }
    static TypeTag boolean() { return {Kind::Bool, {}, {}}; }
    static TypeTag string() { return {Kind::String, {}, {}}; }
    static TypeTag string_array() { return {Kind::StringArray, {}, {}}; }
    static TypeTag enumeration(std::vector<std::string> ls);
    static TypeTag node() { return {Kind::Node, {}, {}}; }
    static TypeTag stack() { return {Kind::Stack, {}, {}}; }

    bool numeric() const { return kind == Kind::Int || kind == Kind::Nat; }
    bool operator==(const TypeTag& o) const {
        return kind == o.kind && floor == o.floor && labels == o.labels;
    }
    bool operator!=(const TypeTag& o) const { return !(*this == o); }
};

inline TypeTag TypeTag::enumeration(std::vector<std::string> ls) {
    if (ls.empty()) fail(ErrorKind::TypeMismatch, "enum label set must be non-empty");
    std::set<std::string> seen(ls.begin(), ls.end());
    if (seen.size() != ls.size())
        fail(ErrorKind::TypeMismatch, "enum label set must be duplicate-free");
    TypeTag t;
    t.kind = Kind::Enum;
    t.labels = std::move(ls);
    return t;
}

inline std::string type_name(const TypeTag& t) {
    using K = TypeTag::Kind;
    switch (t.kind) {
        case K::Int: return "int";
        case K::Nat: return "nat";
        case K::Bool: return "bool";
        case K::String: return "string";
        case K::StringArray: return "string-array";
        case K::Enum: {
            std::string s = "enum{";
            for (size_t i = 0; i < t.labels.size(); ++i) {
                if (i) s += ",";
                s += t.labels[i];
            }
            return s + "}";
        }
        case K::Node: return "node";
        case K::Stack: return "stack";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Trees (rooted, ordered; nodes carry integer ids)
// ---------------------------------------------------------------------------

/// Rooted ordered tree. Child order is the order of the input encoding and is
/// the "lexicographic" order used by the block primitives.
struct TreeValue {
    struct Node {
        int id = 0;
        int parent = -1;  // id, -1 for root
        std::vector<int> children;
        int size = 1;  // subtree size, precomputed
    };
    int root = 0;
    std::map<int, Node> nodes;

    const Node& at(int id) const {
        auto it = nodes.find(id);
        if (it == nodes.end()) fail(ErrorKind::InvalidNode, "no node " + std::to_string(id));
        return it->second;
    }
    bool has(int id) const { return nodes.count(id) != 0; }

    bool operator==(const TreeValue& o) const {
        if (root != o.root || nodes.size() != o.nodes.size()) return false;
        for (const auto& [id, n] : nodes) {
            auto it = o.nodes.find(id);
            if (it == o.nodes.end()) return false;
            if (n.parent != it->second.parent || n.children != it->second.children) return false;
        }
        return true;
    }
};

/// Reference to a node of a specific tree. The tree travels with the id so
/// host functions can answer parent/child/size queries from the value alone.
struct NodeRef {
    std::shared_ptr<const TreeValue> tree;  // may be null for bare id literals
    int id = 0;

    bool operator==(const NodeRef& o) const {
        if (id != o.id) return false;
        if (!tree || !o.tree) return !tree && !o.tree;
        return tree == o.tree || *tree == *o.tree;
    }
};

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

struct Value;

/// Unassigned marker; realizes blank trace cells.
struct Undef {
    bool operator==(const Undef&) const { return true; }
};

struct EnumValue {
    std::string label;
    bool operator==(const EnumValue& o) const { return label == o.label; }
};

/// Stack of rows of values; all columns push and pop together.
struct StackValue {
    std::vector<std::vector<Value>> rows;
    bool operator==(const StackValue& o) const;
};

struct Value {
    std::variant<Undef, long long, bool, std::string, std::vector<std::string>, EnumValue,
                 NodeRef, StackValue>
        v;

    Value() : v(Undef{}) {}
    Value(long long i) : v(i) {}
    Value(int i) : v(static_cast<long long>(i)) {}
    Value(bool b) : v(b) {}
    Value(std::string s) : v(std::move(s)) {}
    Value(const char* s) : v(std::string(s)) {}
    Value(std::vector<std::string> a) : v(std::move(a)) {}
    Value(EnumValue e) : v(std::move(e)) {}
    Value(NodeRef n) : v(std::move(n)) {}
    Value(StackValue s) : v(std::move(s)) {}

    bool is_undef() const { return std::holds_alternative<Undef>(v); }
    bool is_int() const { return std::holds_alternative<long long>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<std::string>>(v); }
    bool is_enum() const { return std::holds_alternative<EnumValue>(v); }
    bool is_node() const { return std::holds_alternative<NodeRef>(v); }
    bool is_stack() const { return std::holds_alternative<StackValue>(v); }

    long long as_int() const {
        if (!is_int()) fail(ErrorKind::TypeMismatch, "expected integer value");
        return std::get<long long>(v);
    }
    bool as_bool() const {
        if (!is_bool()) fail(ErrorKind::TypeMismatch, "expected boolean value");
        return std::get<bool>(v);
    }
    const std::string& as_string() const {
        if (!is_string()) fail(ErrorKind::TypeMismatch, "expected string value");
        return std::get<std::string>(v);
    }
    const std::vector<std::string>& as_array() const {
        if (!is_array()) fail(ErrorKind::TypeMismatch, "expected string-array value");
        return std::get<std::vector<std::string>>(v);
    }
    const EnumValue& as_enum() const {
        if (!is_enum()) fail(ErrorKind::TypeMismatch, "expected enum value");
        return std::get<EnumValue>(v);
    }
    const NodeRef& as_node() const {
        if (!is_node()) fail(ErrorKind::TypeMismatch, "expected node value");
        return std::get<NodeRef>(v);
    }
    const StackValue& as_stack() const {
        if (!is_stack()) fail(ErrorKind::TypeMismatch, "expected stack value");
        return std::get<StackValue>(v);
    }

    bool operator==(const Value& o) const { return v == o.v; }
    bool operator!=(const Value& o) const { return !(*this == o); }
};

inline bool StackValue::operator==(const StackValue& o) const { return rows == o.rows; }

/// Printable form used in pretty tables and diagnostics.
inline std::string to_display(const Value& val) {
    struct V {
        std::string operator()(const Undef&) const { return "."; }
        std::string operator()(long long i) const { return std::to_string(i); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
        std::string operator()(const std::vector<std::string>& a) const {
            std::string out = "[";
            for (size_t i = 0; i < a.size(); ++i) {
                if (i) out += ",";
                out += a[i];
            }
            return out + "]";
        }
        std::string operator()(const EnumValue& e) const { return e.label; }
        std::string operator()(const NodeRef& n) const { return std::to_string(n.id); }
        std::string operator()(const StackValue& s) const {
            return "stack(" + std::to_string(s.rows.size()) + ")";
        }
    };
    return std::visit(V{}, val.v);
}

/// Does a runtime value inhabit the given type?
inline bool value_fits(const Value& val, const TypeTag& ty) {
    using K = TypeTag::Kind;
    if (val.is_undef()) return true;  // undefined is permitted for every variable
    switch (ty.kind) {
        case K::Int: return val.is_int();
        case K::Nat: return val.is_int() && val.as_int() >= 0;
        case K::Bool: return val.is_bool();
        case K::String: return val.is_string();
        case K::StringArray: return val.is_array();
        case K::Enum:
            return val.is_enum() && std::find(ty.labels.begin(), ty.labels.end(),
                                              val.as_enum().label) != ty.labels.end();
        case K::Node: return val.is_node();
        case K::Stack: return val.is_stack();
    }
    return false;
}

// ---------------------------------------------------------------------------
// Machine state
// ---------------------------------------------------------------------------

/// Valuation of all declared variables; missing entries read as undefined.
/// Equality is semantic: an absent variable equals an explicitly undefined
/// one.
struct MachineState {
    std::map<std::string, Value> vals;

    const Value& get(const std::string& name) const {
        static const Value undef{};
        auto it = vals.find(name);
        return it == vals.end() ? undef : it->second;
    }
    void set(const std::string& name, Value v) { vals[name] = std::move(v); }

    bool operator==(const MachineState& o) const {
        for (const auto& [k, v] : vals)
            if (!(v == o.get(k))) return false;
        for (const auto& [k, v] : o.vals)
            if (!vals.count(k) && !v.is_undef()) return false;
        return true;
    }
    bool operator!=(const MachineState& o) const { return !(*this == o); }
};

// ---------------------------------------------------------------------------
// Host function registry
// ---------------------------------------------------------------------------

/// Host-registered function; must be deterministic and pure.
struct FunctionDef {
    std::string name;
    std::vector<TypeTag> params;
    TypeTag result;
    std::function<Value(std::span<const Value>)> fn;
};

struct FunctionRegistry {
    std::map<std::string, FunctionDef> fns;

    void add(FunctionDef def) { fns[def.name] = std::move(def); }
    bool has(const std::string& name) const { return fns.count(name) != 0; }
    const FunctionDef& at(const std::string& name) const {
        auto it = fns.find(name);
        if (it == fns.end()) fail(ErrorKind::UnknownName, "unknown function " + name);
        return it->second;
    }
};

}  // namespace tracesynth
