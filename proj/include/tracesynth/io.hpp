#pragma once

#include <fstream>

#include "json.hpp"
#include "tracesynth/builtins.hpp"
#include "tracesynth/method.hpp"

namespace tracesynth {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON file formats. All emitters use ordered_json with fixed key order so
// outputs are deterministic and diffable.
// ---------------------------------------------------------------------------

/// Parses JSON, reporting failures with line and column.
inline Json parse_json(const std::string& text, const std::string& origin = "input") {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(ErrorKind::Format, origin + ": JSON parse error at line " + std::to_string(line) +
                                    ", column " + std::to_string(col) + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Format, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Format, "cannot write " + path);
    out << content;
}

// --- types -------------------------------------------------------------------

inline Json type_to_json(const TypeTag& t) {
    using K = TypeTag::Kind;
    switch (t.kind) {
        case K::Int:
            if (t.floor) return Json{{"int", Json{{"floor", *t.floor}}}};
            return "int";
        case K::Nat: return "nat";
        case K::Bool: return "bool";
        case K::String: return "string";
        case K::StringArray: return "string-array";
        case K::Enum: return Json{{"enum", t.labels}};
        case K::Node: return "node";
        case K::Stack: return "stack";
    }
    fail(ErrorKind::Format, "unknown type");
}

inline TypeTag type_from_json(const Json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "int") return TypeTag::intty();
        if (s == "nat") return TypeTag::nat();
        if (s == "bool") return TypeTag::boolean();
        if (s == "string") return TypeTag::string();
        if (s == "string-array") return TypeTag::string_array();
        if (s == "node") return TypeTag::node();
        if (s == "stack") return TypeTag::stack();
        fail(ErrorKind::Format, "unknown type '" + s + "'");
    }
    if (j.is_object()) {
        if (j.contains("enum")) return TypeTag::enumeration(j.at("enum").get<std::vector<std::string>>());
        if (j.contains("int")) return TypeTag::intty(j.at("int").at("floor").get<long long>());
    }
    fail(ErrorKind::Format, "malformed type: " + j.dump());
}

// --- trees and values --------------------------------------------------------

inline Json tree_to_json(const TreeValue& t, int id) {
    const auto& n = t.at(id);
    Json j;
    j["id"] = n.id;
    if (!n.children.empty()) {
        Json kids = Json::array();
        for (int c : n.children) kids.push_back(tree_to_json(t, c));
        j["children"] = kids;
    }
    return j;
}

namespace detail {

inline void tree_from_json(const Json& j, int parent,
                           std::vector<std::pair<int, int>>& id_parent) {
    int id = j.at("id").get<int>();
    id_parent.push_back({id, parent});
    if (j.contains("children"))
        for (const auto& c : j.at("children")) tree_from_json(c, id, id_parent);
}

}  // namespace detail

inline std::shared_ptr<const TreeValue> tree_from_json(const Json& j) {
    std::vector<std::pair<int, int>> id_parent;
    detail::tree_from_json(j, -1, id_parent);
    return make_tree(id_parent);
}

inline Json value_to_json(const Value& v) {
    struct V {
        Json operator()(const Undef&) const { return nullptr; }
        Json operator()(long long i) const { return i; }
        Json operator()(bool b) const { return b; }
        Json operator()(const std::string& s) const { return s; }
        Json operator()(const std::vector<std::string>& a) const { return a; }
        Json operator()(const EnumValue& e) const { return e.label; }
        Json operator()(const NodeRef& n) const {
            Json j;
            j["node"] = n.id;
            if (n.tree) j["tree"] = tree_to_json(*n.tree, n.tree->root);
            return j;
        }
        Json operator()(const StackValue& s) const {
            Json rows = Json::array();
            for (const auto& row : s.rows) {
                Json r = Json::array();
                for (const auto& val : row) r.push_back(value_to_json(val));
                rows.push_back(r);
            }
            return Json{{"stack", rows}};
        }
    };
    return std::visit(V{}, v.v);
}

/// Parses a value against a declared type. Numbers, booleans and strings are
/// direct; enums are their label strings; nodes are {"node": id} with an
/// optional "tree"; stacks are {"stack": [[...], ...]}.
inline Value value_from_json(const Json& j, const TypeTag& ty) {
    using K = TypeTag::Kind;
    if (j.is_null()) return Value();
    switch (ty.kind) {
        case K::Int:
        case K::Nat: {
            if (!j.is_number_integer()) fail(ErrorKind::Format, "expected integer: " + j.dump());
            Value v(j.get<long long>());
            if (!value_fits(v, ty))
                fail(ErrorKind::Format, "value " + j.dump() + " does not fit " + type_name(ty));
            return v;
        }
        case K::Bool:
            if (!j.is_boolean()) fail(ErrorKind::Format, "expected boolean: " + j.dump());
            return Value(j.get<bool>());
        case K::String:
            if (!j.is_string()) fail(ErrorKind::Format, "expected string: " + j.dump());
            return Value(j.get<std::string>());
        case K::StringArray:
            if (!j.is_array()) fail(ErrorKind::Format, "expected array: " + j.dump());
            return Value(j.get<std::vector<std::string>>());
        case K::Enum: {
            if (!j.is_string()) fail(ErrorKind::Format, "expected enum label: " + j.dump());
            Value v(EnumValue{j.get<std::string>()});
            if (!value_fits(v, ty))
                fail(ErrorKind::Format, "'" + j.get<std::string>() + "' is not a label of " +
                                            type_name(ty));
            return v;
        }
        case K::Node: {
            if (j.is_number_integer()) return Value(NodeRef{nullptr, j.get<int>()});
            if (!j.is_object() || !j.contains("node"))
                fail(ErrorKind::Format, "expected node value: " + j.dump());
            NodeRef n;
            n.id = j.at("node").get<int>();
            if (j.contains("tree")) n.tree = tree_from_json(j.at("tree"));
            return Value(n);
        }
        case K::Stack: {
            if (!j.is_object() || !j.contains("stack"))
                fail(ErrorKind::Format, "expected stack value: " + j.dump());
            StackValue s;
            for (const auto& row : j.at("stack")) {
                std::vector<Value> vals;
                for (const auto& cell : row) {
                    if (cell.is_number_integer())
                        vals.push_back(Value(cell.get<long long>()));
                    else if (cell.is_boolean())
                        vals.push_back(Value(cell.get<bool>()));
                    else if (cell.is_string())
                        vals.push_back(Value(EnumValue{cell.get<std::string>()}));
                    else
                        fail(ErrorKind::Format, "unsupported stack cell: " + cell.dump());
                }
                s.rows.push_back(std::move(vals));
            }
            return Value(std::move(s));
        }
    }
    fail(ErrorKind::Format, "unsupported type");
}

// --- machine states ----------------------------------------------------------

/// States serialize with one entry per declared variable, in declaration
/// order; unassigned variables appear as null.
inline Json state_to_json(const Model& model, const MachineState& s) {
    Json j = Json::object();
    for (const auto& v : model.variables) j[v.name] = value_to_json(s.get(v.name));
    return j;
}

inline MachineState state_from_json(const Model& model, const Json& j) {
    MachineState s = blank_state(model);
    for (const auto& [key, val] : j.items()) {
        const Variable* var = model.find_variable(key);
        if (!var) fail(ErrorKind::Format, "state sets unknown variable " + key);
        s.set(key, value_from_json(val, var->type));
    }
    return s;
}

// --- models --------------------------------------------------------------

inline Json model_to_json(const Model& m) {
    Json j;
    Json vars = Json::array();
    for (const auto& v : m.variables) vars.push_back(Json{{"name", v.name}, {"type", type_to_json(v.type)}});
    j["variables"] = vars;
    if (!m.builtin_sets.empty()) j["builtins"] = m.builtin_sets;
    Json ops = Json::array();
    for (const auto& op : m.operations) {
        Json o;
        o["name"] = op.name;
        Json assign = Json::object();
        for (const auto& var : m.variables) {
            auto it = op.assign.find(var.name);
            if (it != op.assign.end()) assign[var.name] = to_string(*it->second);
        }
        o["assign"] = assign;
        ops.push_back(o);
    }
    j["operations"] = ops;
    Json preds = Json::array();
    for (const auto& p : m.predicates)
        preds.push_back(Json{{"name", p.name}, {"formula", to_string(*p.formula)}});
    j["predicates"] = preds;
    return j;
}

inline Model model_from_json(const Json& j) {
    Model m;
    for (const auto& v : j.at("variables"))
        m.variables.push_back({v.at("name").get<std::string>(), type_from_json(v.at("type"))});
    if (j.contains("builtins"))
        for (const auto& b : j.at("builtins")) enable_builtins(m, b.get<std::string>());
    if (j.contains("vm")) {
        // enumerate all parallel assignments and predicates induced by the
        // declared variables and enabled functions
        bool repeats = false;
        if (j.at("vm").is_object() && j.at("vm").contains("allow-repeated-args"))
            repeats = j.at("vm").at("allow-repeated-args").get<bool>();
        std::vector<FunctionDef> fns;
        for (const auto& [name, fn] : m.functions.fns) fns.push_back(fn);
        m.operations = enumerate_parallel_assignments(m.variables, fns);
        m.predicates = enumerate_vm_predicates(m.variables, fns, repeats);
    }
    if (j.contains("operations")) {
        for (const auto& o : j.at("operations")) {
            Operation op;
            op.name = o.at("name").get<std::string>();
            if (o.contains("assign"))
                for (const auto& [var, expr] : o.at("assign").items())
                    op.assign[var] = parse_expr(expr.get<std::string>());
            m.operations.push_back(std::move(op));
        }
    }
    if (j.contains("predicates")) {
        for (const auto& p : j.at("predicates"))
            m.predicates.push_back({p.at("name").get<std::string>(),
                                    parse_expr(p.at("formula").get<std::string>())});
    }
    validate_model(m);
    return m;
}

// --- programs -------------------------------------------------------------

inline Json program_to_json(const Model& model, const Program& p) {
    (void)model;
    Json j;
    j["start"] = p.start;
    Json states = Json::array();
    for (const auto& s : p.states) {
        Json st;
        st["name"] = s.name;
        if (!s.op.empty()) st["op"] = s.op;
        if (s.terminal) st["terminal"] = true;
        if (s.noop) st["noop"] = true;
        states.push_back(st);
    }
    j["states"] = states;
    Json edges = Json::array();
    for (const auto& e : p.edges) {
        Json ed;
        ed["from"] = e.from;
        ed["to"] = e.to;
        if (e.pred.symbolic())
            ed["when"] = formula_text(e.pred);
        else
            ed["words"] = std::vector<std::string>(e.pred.words.begin(), e.pred.words.end());
        edges.push_back(ed);
    }
    j["edges"] = edges;
    return j;
}

inline Program program_from_json(const Model& model, const Json& j) {
    Program p;
    p.start = j.at("start").get<std::string>();
    for (const auto& s : j.at("states")) {
        ProgramState st;
        st.name = s.at("name").get<std::string>();
        if (s.contains("op")) st.op = s.at("op").get<std::string>();
        if (s.contains("terminal")) st.terminal = s.at("terminal").get<bool>();
        if (s.contains("noop")) st.noop = s.at("noop").get<bool>();
        p.states.push_back(std::move(st));
    }
    for (const auto& e : j.at("edges")) {
        ProgramEdge ed;
        ed.from = e.at("from").get<std::string>();
        ed.to = e.at("to").get<std::string>();
        if (e.contains("when"))
            ed.pred = parse_edge_formula(model, e.at("when").get<std::string>());
        else if (e.contains("words")) {
            std::set<std::string> ws;
            for (const auto& w : e.at("words")) ws.insert(w.get<std::string>());
            ed.pred = EdgePredicate::word_set(std::move(ws));
        } else {
            ed.pred = EdgePredicate::word_set({});
        }
        p.edges.push_back(std::move(ed));
    }
    validate_program(model, p);
    return p;
}

// --- traces -----------------------------------------------------------------

inline Json trace_to_json(const Model& model, const GeneralizedTrace& gt) {
    Json j;
    if (!gt.name.empty()) j["name"] = gt.name;
    Json input = Json::object();
    for (const auto& v : model.variables) {
        const Value& val = gt.input_row.get(v.name);
        if (!val.is_undef()) input[v.name] = value_to_json(val);
    }
    j["input"] = input;
    Json rows = Json::array();
    for (const auto& row : gt.rows) {
        Json r = Json::object();
        if (!row.op_name.empty()) r["op"] = row.op_name;
        Json values = Json::object();
        Json exprs = Json::object();
        bool any_expr = false;
        for (const auto& var : model.variables) {
            auto it = row.cells.find(var.name);
            if (it == row.cells.end()) continue;
            if (it->second.literal) values[var.name] = value_to_json(*it->second.literal);
            if (it->second.expr) {
                exprs[var.name] = to_string(*it->second.expr);
                any_expr = true;
            }
        }
        r["values"] = values;
        if (any_expr) r["exprs"] = exprs;
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j;
}

inline GeneralizedTrace trace_from_json(const Model& model, const Json& j,
                                        const std::string& default_name = "") {
    GeneralizedTrace gt;
    gt.name = j.contains("name") ? j.at("name").get<std::string>() : default_name;
    gt.input_row = blank_state(model);
    if (j.contains("input"))
        for (const auto& [key, val] : j.at("input").items()) {
            const Variable* var = model.find_variable(key);
            if (!var) fail(ErrorKind::Format, "trace input sets unknown variable " + key);
            gt.input_row.set(key, value_from_json(val, var->type));
        }
    if (j.contains("rows")) {
        for (const auto& r : j.at("rows")) {
            GeneralizedRow row;
            if (r.contains("op")) row.op_name = r.at("op").get<std::string>();
            if (r.contains("values")) {
                for (const auto& [key, val] : r.at("values").items()) {
                    const Variable* var = model.find_variable(key);
                    if (!var) fail(ErrorKind::Format, "trace row sets unknown variable " + key);
                    if (val.is_null()) continue;  // null encodes a blank cell
                    row.cells[key].literal = value_from_json(val, var->type);
                }
            }
            if (r.contains("exprs")) {
                for (const auto& [key, expr] : r.at("exprs").items()) {
                    if (!model.find_variable(key))
                        fail(ErrorKind::Format, "trace row generalizes unknown variable " + key);
                    row.cells[key].expr = parse_expr(expr.get<std::string>());
                }
            }
            gt.rows.push_back(std::move(row));
        }
    }
    return gt;
}

// --- run results --------------------------------------------------------------

inline Json run_result_to_json(const Model& model, const RunResult& rr) {
    Json j;
    j["outcome"] = to_string(rr.outcome);
    if (!rr.detail.empty()) j["detail"] = rr.detail;
    j["visited"] = rr.visited;
    j["ops"] = rr.ops;
    Json tr = Json::array();
    for (const auto& s : rr.trace) tr.push_back(state_to_json(model, s));
    j["trace"] = tr;
    return j;
}

// --- reports -------------------------------------------------------------------

inline Json generalization_report_to_json(const GeneralizationReport& rep) {
    Json j;
    j["ok"] = rep.ok;
    Json cells = Json::array();
    for (const auto& c : rep.cells) {
        Json e;
        e["row"] = c.row;
        e["var"] = c.var;
        e["ok"] = c.ok;
        if (!c.detail.empty()) e["detail"] = c.detail;
        cells.push_back(e);
    }
    j["cells"] = cells;
    return j;
}

inline Json verify_report_to_json(const VerifyReport& rep) {
    Json j;
    j["ok"] = rep.ok();
    Json vs = Json::array();
    for (const auto& v : rep.violations) {
        Json e;
        e["trace"] = v.trace;
        e["row"] = v.row;
        if (!v.from.empty()) e["from"] = v.from;
        if (!v.to.empty()) e["to"] = v.to;
        e["detail"] = v.detail;
        vs.push_back(e);
    }
    j["violations"] = vs;
    j["warnings"] = rep.warnings;
    Json paths = Json::object();
    for (const auto& [name, path] : rep.paths) paths[name] = path;
    j["paths"] = paths;
    return j;
}

inline Json witness_report_to_json(const EdgeWitnessReport& rep) {
    Json j;
    Json ws = Json::array();
    for (const auto& [edge, hits] : rep.witnesses) {
        Json e;
        e["from"] = edge.first;
        e["to"] = edge.second;
        Json h = Json::array();
        for (const auto& [trace, row] : hits) h.push_back(Json{{"trace", trace}, {"row", row}});
        e["witnesses"] = h;
        ws.push_back(e);
    }
    j["edges"] = ws;
    Json un = Json::array();
    for (const auto& [from, to] : rep.unwitnessed) un.push_back(Json{{"from", from}, {"to", to}});
    j["unwitnessed"] = un;
    j["unreached_states"] = rep.unreached_states;
    return j;
}

inline Json heuristic_report_to_json(const HeuristicResult& res) {
    Json j;
    Json classes = Json::object();
    classes["start"] = 1;
    for (const auto& [op, color] : res.color_of_op) classes[op] = color;
    j["k"] = res.coloring.k;
    j["colors"] = classes;
    Json cs = Json::array();
    for (const auto& c : res.conflicts) {
        Json e;
        e["kind"] = c.kind == HeuristicConflict::Kind::Properness ? "properness" : "restriction";
        e["a"] = Json{{"trace", c.a.first}, {"line", c.a.second}};
        e["b"] = Json{{"trace", c.b.first}, {"line", c.b.second}};
        e["detail"] = c.detail;
        cs.push_back(e);
    }
    j["conflicts"] = cs;
    return j;
}

inline Json determinism_report_to_json(const std::vector<DeterminismConflict>& cs) {
    Json j = Json::array();
    for (const auto& c : cs)
        j.push_back(Json{{"state", c.state}, {"word", c.word}, {"targets", c.targets}});
    return j;
}

inline Json validation_to_json(const TraceValidation& v) {
    Json j;
    j["valid"] = v.valid;
    if (v.first_failure) j["first_failure_step"] = *v.first_failure;
    Json steps = Json::array();
    for (const auto& s : v.steps)
        steps.push_back(Json{{"step", s.step}, {"witnesses", s.witnesses}});
    j["steps"] = steps;
    return j;
}

// --- decision trees -------------------------------------------------------------

inline DecisionTree::NodePtr decision_node_from_json(const Json& j) {
    if (j.contains("goto")) return DecisionTree::goto_state(j.at("goto").get<std::string>());
    return DecisionTree::test(j.at("pred").get<std::string>(),
                              decision_node_from_json(j.at("true")),
                              decision_node_from_json(j.at("false")));
}

inline DecisionTree decision_tree_from_json(const Json& j) {
    DecisionTree dt;
    dt.root = decision_node_from_json(j);
    return dt;
}

inline Json decision_node_to_json(const DecisionTree::NodePtr& n) {
    if (n->leaf) return Json{{"goto", n->label}};
    Json j;
    j["pred"] = n->label;
    j["true"] = decision_node_to_json(n->on_true);
    j["false"] = decision_node_to_json(n->on_false);
    return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tracesynth
