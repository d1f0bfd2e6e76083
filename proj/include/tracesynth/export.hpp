#pragma once

#include <sstream>

#include "tracesynth/program.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Rendering programs: DOT graphs, imperative goto blocks, functional
// nested-if expressions. All outputs are deterministic: equal programs yield
// byte-identical text.
// ---------------------------------------------------------------------------

struct RenderOptions {
    enum class Format { Dot, Imperative, Functional };
    enum class Predicates { Symbolic, WordSetAsDnf };
    Format format = Format::Dot;
    Predicates predicates = Predicates::Symbolic;
};

/// A word set rendered as a disjunction of full conjunctions over the model's
/// predicate names; denotes the same boolean function as the set. Undefined
/// bits ('?') constrain nothing and are omitted from the conjunction.
inline std::string word_set_as_dnf(const Model& model, const std::set<std::string>& words) {
    if (words.empty()) return "false";
    std::string out;
    bool first = true;
    for (const auto& w : words) {
        std::string conj;
        for (size_t i = 0; i < w.size(); ++i) {
            if (w[i] == '?') continue;
            if (!conj.empty()) conj += " & ";
            if (w[i] == '0') conj += "!";
            conj += model.predicates[i].name;
        }
        if (conj.empty()) conj = "true";
        if (!first) out += " | ";
        out += words.size() > 1 ? "(" + conj + ")" : conj;
        first = false;
    }
    return out;
}

inline std::string edge_label(const Model& model, const EdgePredicate& p,
                              RenderOptions::Predicates mode) {
    if (p.symbolic()) return formula_text(p);
    if (mode == RenderOptions::Predicates::WordSetAsDnf) return word_set_as_dnf(model, p.words);
    return formula_text(p);
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

/// One node per state (terminal states shaded, noop states dashed), one
/// labeled edge per CFG edge. Nodes sorted by name, edges by (from, to,
/// label).
inline std::string to_dot(const Model& model, const Program& program,
                          RenderOptions::Predicates mode = RenderOptions::Predicates::Symbolic) {
    std::vector<const ProgramState*> states;
    for (const auto& s : program.states) states.push_back(&s);
    std::sort(states.begin(), states.end(),
              [](const ProgramState* a, const ProgramState* b) { return a->name < b->name; });

    struct EdgeRow {
        std::string from, to, label;
    };
    std::vector<EdgeRow> edges;
    for (const auto& e : program.edges)
        edges.push_back({e.from, e.to, edge_label(model, e.pred, mode)});
    std::sort(edges.begin(), edges.end(), [](const EdgeRow& a, const EdgeRow& b) {
        return std::tie(a.from, a.to, a.label) < std::tie(b.from, b.to, b.label);
    });

    std::ostringstream out;
    out << "digraph program {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box];\n";
    for (const ProgramState* s : states) {
        out << "  \"" << detail::dot_escape(s->name) << "\" [label=\""
            << detail::dot_escape(s->name);
        if (!s->op.empty() && s->op != s->name) out << "\\n" << detail::dot_escape(s->op);
        out << "\"";
        if (s->terminal) out << ", style=filled, fillcolor=lightgray";
        if (s->noop) out << ", style=dashed";
        out << "];\n";
    }
    for (const auto& e : edges) {
        out << "  \"" << detail::dot_escape(e.from) << "\" -> \"" << detail::dot_escape(e.to)
            << "\" [label=\"" << detail::dot_escape(e.label) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

namespace detail {

inline std::vector<std::string> assignment_lines(const Model& model, const ProgramState& s) {
    std::vector<std::string> out;
    if (s.op.empty()) return out;
    const Operation& op = model.operation(s.op);
    for (const auto& var : model.variables) {
        auto it = op.assign.find(var.name);
        if (it != op.assign.end()) out.push_back(var.name + " := " + to_string(*it->second));
    }
    return out;
}

}  // namespace detail

/// Per state: a block label, the parallel assignment, one conditional goto
/// per outgoing edge in declared order, then `goto END`. The start block
/// emits only the dispatch.
inline std::string emit_imperative(const Model& model, const Program& program,
                                   RenderOptions::Predicates mode =
                                       RenderOptions::Predicates::Symbolic) {
    std::ostringstream out;
    std::vector<const ProgramState*> order;
    order.push_back(&program.state(program.start));
    for (const auto& s : program.states)
        if (s.name != program.start) order.push_back(&s);

    for (const ProgramState* s : order) {
        out << "S_" << s->name << ":\n";
        for (const auto& line : detail::assignment_lines(model, *s)) out << "  " << line << "\n";
        for (const ProgramEdge* e : program.out_edges(s->name))
            out << "  if " << edge_label(model, e->pred, mode) << " goto S_" << e->to << "\n";
        out << "  goto END\n\n";
    }
    out << "END:\n";
    return out.str();
}

/// One function per state: compute s' by executing the state's operation,
/// then a nested if chain over the outgoing edges in declared order; the
/// final else returns s'.
inline std::string emit_functional(const Model& model, const Program& program,
                                   RenderOptions::Predicates mode =
                                       RenderOptions::Predicates::Symbolic) {
    std::ostringstream out;
    std::vector<const ProgramState*> order;
    order.push_back(&program.state(program.start));
    for (const auto& s : program.states)
        if (s.name != program.start) order.push_back(&s);

    for (const ProgramState* s : order) {
        out << "fun f_" << s->name << "(s):\n";
        if (s->op.empty())
            out << "  let s' = s\n";
        else
            out << "  let s' = " << s->op << "(s)\n";
        auto edges = program.out_edges(s->name);
        if (edges.empty()) {
            out << "  return s'\n\n";
            continue;
        }
        bool first = true;
        for (const ProgramEdge* e : edges) {
            out << "  " << (first ? "if" : "else if") << " "
                << edge_label(model, e->pred, mode) << "(s') then return f_" << e->to << "(s')\n";
            first = false;
        }
        out << "  else return s'\n\n";
    }
    out << "fun main(s): return f_" << program.start << "(s)\n";
    return out.str();
}

inline std::string render(const Model& model, const Program& program, const RenderOptions& opts) {
    switch (opts.format) {
        case RenderOptions::Format::Dot: return to_dot(model, program, opts.predicates);
        case RenderOptions::Format::Imperative:
            return emit_imperative(model, program, opts.predicates);
        case RenderOptions::Format::Functional:
            return emit_functional(model, program, opts.predicates);
    }
    fail(ErrorKind::Format, "unknown render format");
}

}  // namespace tracesynth
