#pragma once

#include "tracesynth/trace.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Edge predicates
//
// An edge predicate denotes a k-ary boolean function of the predicate word,
// where k is the number of model predicates. Two forms:
//   Symbolic - boolean formula over predicate names (connectives &, |, !,
//              constants true/false),
//   WordSet  - explicit set of accepted predicate words.
// Symbolic formulas are evaluated over predicate-word bits, never by pushing
// state expressions through per edge; bits are computed once per state and
// shared. Connectives short-circuit, so bits that are not needed are not
// demanded.
// ---------------------------------------------------------------------------

struct EdgePredicate {
    ExprPtr formula;                 // restricted to Lit(bool)/Var/Not/And/Or
    std::set<std::string> words;     // used when formula is null
    std::string source;              // textual form for rendering

    bool symbolic() const { return formula != nullptr; }

    static EdgePredicate always_true() {
        EdgePredicate p;
        p.formula = Expr::literal(Value(true));
        p.source = "true";
        return p;
    }
    static EdgePredicate word_set(std::set<std::string> ws) {
        EdgePredicate p;
        p.words = std::move(ws);
        return p;
    }

    bool operator==(const EdgePredicate& o) const {
        if (symbolic() != o.symbolic()) return false;
        if (symbolic()) return expr_equal(*formula, *o.formula);
        return words == o.words;
    }
};

namespace detail {

/// Tokenizes a symbolic edge-predicate formula. Predicate names may contain
/// characters like '=' or '-', so names are matched greedily (longest first)
/// against the model's declared predicate list.
struct FormulaParser {
    const std::string& src;
    std::vector<std::string> names;  // sorted by length, descending
    size_t pos = 0;

    FormulaParser(const std::string& s, const Model& model) : src(s) {
        for (const auto& p : model.predicates) names.push_back(p.name);
        std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
            return a.size() != b.size() ? a.size() > b.size() : a < b;
        });
    }

    [[noreturn]] void error(const std::string& msg) {
        fail(ErrorKind::Format,
             "edge predicate parse error at " + std::to_string(pos) + " in '" + src + "': " + msg);
    }
    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    ExprPtr parse() {
        ExprPtr e = parse_or();
        skip_ws();
        if (pos != src.size()) error("trailing input");
        return e;
    }
    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (true) {
            skip_ws();
            if (pos < src.size() && src[pos] == '|') {
                ++pos;
                e = Expr::make(Expr::Op::Or, {e, parse_and()});
            } else {
                return e;
            }
        }
    }
    ExprPtr parse_and() {
        ExprPtr e = parse_unary();
        while (true) {
            skip_ws();
            if (pos < src.size() && src[pos] == '&') {
                ++pos;
                e = Expr::make(Expr::Op::And, {e, parse_unary()});
            } else {
                return e;
            }
        }
    }
    ExprPtr parse_unary() {
        skip_ws();
        if (pos < src.size() && src[pos] == '!') {
            ++pos;
            return Expr::make(Expr::Op::Not, {parse_unary()});
        }
        return parse_primary();
    }
    ExprPtr parse_primary() {
        skip_ws();
        if (pos >= src.size()) error("unexpected end of input");
        if (src[pos] == '(') {
            ++pos;
            ExprPtr e = parse_or();
            skip_ws();
            if (pos >= src.size() || src[pos] != ')') error("')' expected");
            ++pos;
            return e;
        }
        for (const auto& name : names) {
            if (src.compare(pos, name.size(), name) == 0) {
                pos += name.size();
                return Expr::var(name);
            }
        }
        if (src.compare(pos, 4, "true") == 0) {
            pos += 4;
            return Expr::literal(Value(true));
        }
        if (src.compare(pos, 5, "false") == 0) {
            pos += 5;
            return Expr::literal(Value(false));
        }
        error("expected a declared predicate name, 'true', 'false' or '('");
    }
};

}  // namespace detail

inline EdgePredicate parse_edge_formula(const Model& model, const std::string& text) {
    EdgePredicate p;
    p.formula = detail::FormulaParser(text, model).parse();
    p.source = text;
    return p;
}

inline std::string formula_text(const EdgePredicate& p) {
    if (p.symbolic()) return p.source.empty() ? to_string(*p.formula) : p.source;
    std::string s = "{";
    bool first = true;
    for (const auto& w : p.words) {
        if (!first) s += ",";
        s += w;
        first = false;
    }
    return s + "}";
}

/// Evaluates a symbolic formula against a bit provider (one bit per predicate
/// name). The provider may throw; short-circuiting limits which bits are
/// demanded.
inline bool eval_formula(const Expr& f, const std::function<bool(const std::string&)>& bit) {
    using O = Expr::Op;
    switch (f.op) {
        case O::Lit: return f.lit.as_bool();
        case O::Var: return bit(f.name);
        case O::Not: return !eval_formula(*f.args[0], bit);
        case O::And:
            return eval_formula(*f.args[0], bit) && eval_formula(*f.args[1], bit);
        case O::Or:
            return eval_formula(*f.args[0], bit) || eval_formula(*f.args[1], bit);
        default: fail(ErrorKind::Format, "not an edge-predicate formula");
    }
}

/// Evaluates an edge predicate against an explicit predicate word.
inline bool accepts_word(const Model& model, const EdgePredicate& p, const std::string& word) {
    if (!p.symbolic()) return p.words.count(word) != 0;
    return eval_formula(*p.formula, [&](const std::string& name) {
        int idx = model.predicate_index(name);
        if (idx < 0) fail(ErrorKind::UnknownName, "unknown predicate " + name);
        char c = word.at(static_cast<size_t>(idx));
        if (c == '?') fail(ErrorKind::UndefinedRead, "predicate " + name + " undefined in word");
        return c == '1';
    });
}

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

struct ProgramState {
    std::string name;
    std::string op;       // operation label; empty = the empty operation
    bool terminal = false;
    bool noop = false;    // consumes no row during generalized-trace replay
};

struct ProgramEdge {
    std::string from;
    std::string to;
    EdgePredicate pred;
};

/// Control-flow-graph program over a model: start state v0 (in-degree 0, no
/// operation), operation labeling, edge predicates.
struct Program {
    std::string start;
    std::vector<ProgramState> states;
    std::vector<ProgramEdge> edges;

    const ProgramState* find_state(const std::string& name) const {
        for (const auto& s : states)
            if (s.name == name) return &s;
        return nullptr;
    }
    const ProgramState& state(const std::string& name) const {
        const ProgramState* s = find_state(name);
        if (!s) fail(ErrorKind::UnknownName, "unknown program state " + name);
        return *s;
    }
    std::vector<const ProgramEdge*> out_edges(const std::string& from) const {
        std::vector<const ProgramEdge*> out;
        for (const auto& e : edges)
            if (e.from == from) out.push_back(&e);
        return out;
    }
    bool is_noop(const std::string& name) const { return state(name).noop; }
};

/// Structural checks: start in-degree 0 and unlabeled, labels resolvable,
/// terminal states sink, noop states carry the empty operation.
inline void validate_program(const Model& model, const Program& p) {
    std::set<std::string> names;
    for (const auto& s : p.states)
        if (!names.insert(s.name).second)
            fail(ErrorKind::Format, "duplicate program state " + s.name);
    if (!p.find_state(p.start)) fail(ErrorKind::Format, "missing start state " + p.start);
    if (!p.state(p.start).op.empty())
        fail(ErrorKind::Format, "start state must not carry an operation");
    for (const auto& e : p.edges) {
        if (!p.find_state(e.from) || !p.find_state(e.to))
            fail(ErrorKind::Format, "edge references unknown state " + e.from + "->" + e.to);
        if (e.to == p.start) fail(ErrorKind::Format, "start state must have in-degree 0");
        if (!e.pred.symbolic())
            for (const auto& w : e.pred.words)
                if (w.size() != model.predicates.size())
                    fail(ErrorKind::Format, "word '" + w + "' has wrong length on edge " + e.from +
                                                "->" + e.to);
    }
    for (const auto& s : p.states) {
        if (s.name == p.start) continue;
        if (s.op.empty()) {
            if (!s.noop && !s.terminal)
                fail(ErrorKind::Format, "state " + s.name + " has no operation label");
        } else {
            const Operation& op = model.operation(s.op);
            if (s.noop && !op.assign.empty())
                fail(ErrorKind::Format, "noop state " + s.name + " has a non-empty operation");
        }
        if (s.terminal && !p.out_edges(s.name).empty())
            fail(ErrorKind::Format, "terminal state " + s.name + " has outgoing edges");
    }
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct RunResult {
    enum class Outcome { Terminated, FuelExhausted, Ambiguous, EvalError };
    Outcome outcome = Outcome::Terminated;
    std::vector<MachineState> trace;   // machine states, starting with the input
    std::vector<std::string> ops;      // operation applied at each step
    std::vector<std::string> visited;  // program states, starting with `from`
    std::string detail;                // ambiguity word or error message

    bool terminated() const { return outcome == Outcome::Terminated; }
};

inline const char* to_string(RunResult::Outcome o) {
    switch (o) {
        case RunResult::Outcome::Terminated: return "terminated";
        case RunResult::Outcome::FuelExhausted: return "fuel-exhausted";
        case RunResult::Outcome::Ambiguous: return "ambiguous";
        case RunResult::Outcome::EvalError: return "eval-error";
    }
    return "?";
}

constexpr long long kDefaultFuel = 1000000;

namespace detail {

/// Per-state bit cache for predicate evaluation. Bits are computed on demand
/// so edge formulas can be decided even when unrelated predicates read
/// unassigned variables.
struct BitCache {
    const Model& model;
    const MachineState& state;
    std::map<std::string, char> memo;  // '0' / '1' / 'E'

    bool bit(const std::string& name) {
        auto it = memo.find(name);
        if (it == memo.end()) {
            const Predicate* p = model.find_predicate(name);
            if (!p) fail(ErrorKind::UnknownName, "unknown predicate " + name);
            char c;
            try {
                c = eval_expr(model, state, *p->formula).as_bool() ? '1' : '0';
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::UndefinedRead) throw;
                c = 'E';
            }
            it = memo.emplace(name, c).first;
        }
        if (it->second == 'E')
            fail(ErrorKind::UndefinedRead, "predicate " + name + " reads an unassigned variable");
        return it->second == '1';
    }

    bool edge_true(const EdgePredicate& p) {
        if (p.symbolic())
            return eval_formula(*p.formula, [this](const std::string& n) { return bit(n); });
        return p.words.count(predicate_word_lenient(model, state)) != 0;
    }
};

}  // namespace detail

/// Executes a program from a machine state. At each step every outgoing edge
/// predicate of the current program state is evaluated: none true terminates,
/// more than one true is an ambiguity (reported with the offending word),
/// otherwise the target state's operation is applied and recorded.
inline RunResult run(const Model& model, const Program& program, const MachineState& input,
                     const std::string& from = "", long long fuel = kDefaultFuel) {
    RunResult rr;
    std::string cur = from.empty() ? program.start : from;
    program.state(cur);  // throws on unknown
    MachineState sigma = blank_state(model);
    for (const auto& [k, v] : input.vals) sigma.set(k, v);
    rr.trace.push_back(sigma);
    rr.visited.push_back(cur);
    for (long long step = 0; step < fuel; ++step) {
        detail::BitCache bits{model, sigma, {}};
        std::vector<const ProgramEdge*> taken;
        try {
            for (const ProgramEdge* e : program.out_edges(cur))
                if (bits.edge_true(e->pred)) taken.push_back(e);
        } catch (const Error& err) {
            rr.outcome = RunResult::Outcome::EvalError;
            rr.detail = err.what();
            return rr;
        }
        if (taken.empty()) {
            rr.outcome = RunResult::Outcome::Terminated;
            return rr;
        }
        if (taken.size() > 1) {
            rr.outcome = RunResult::Outcome::Ambiguous;
            rr.detail = "state " + cur + ", word " + predicate_word_lenient(model, sigma);
            return rr;
        }
        const ProgramEdge* e = taken.front();
        const ProgramState& target = program.state(e->to);
        try {
            sigma = apply_operation(model, sigma, target.op);
        } catch (const Error& err) {
            rr.outcome = RunResult::Outcome::EvalError;
            rr.detail = err.what();
            return rr;
        }
        rr.trace.push_back(sigma);
        rr.ops.push_back(target.op);
        rr.visited.push_back(target.name);
        cur = target.name;
    }
    rr.outcome = RunResult::Outcome::FuelExhausted;
    return rr;
}

// ---------------------------------------------------------------------------
// Determinism checking
// ---------------------------------------------------------------------------

struct DeterminismConflict {
    std::string state;
    std::string word;
    std::vector<std::string> targets;
};

inline std::vector<std::string> all_words(size_t k) {
    if (k > 20) fail(ErrorKind::Format, "too many predicates to enumerate all words");
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(1) << k);
    for (size_t m = 0; m < (static_cast<size_t>(1) << k); ++m) {
        std::string w(k, '0');
        for (size_t i = 0; i < k; ++i)
            if (m & (static_cast<size_t>(1) << i)) w[i] = '1';
        out.push_back(std::move(w));
    }
    return out;
}

/// Lists every (state, word) with two or more true outgoing edge predicates.
/// Empty report means the program is deterministic on the given words.
inline std::vector<DeterminismConflict> check_determinism(
    const Model& model, const Program& program,
    const std::vector<std::string>& words = {}) {
    std::vector<std::string> ws = words.empty() ? all_words(model.predicates.size()) : words;
    std::vector<DeterminismConflict> out;
    for (const auto& s : program.states) {
        auto edges = program.out_edges(s.name);
        if (edges.size() < 2) continue;
        for (const auto& w : ws) {
            std::vector<std::string> hit;
            for (const ProgramEdge* e : edges) {
                bool t = false;
                try {
                    t = accepts_word(model, e->pred, w);
                } catch (const Error&) {
                    t = false;  // undefined bit: the edge cannot fire on this word
                }
                if (t) hit.push_back(e->to);
            }
            if (hit.size() > 1) out.push_back({s.name, w, std::move(hit)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Equivalence on a finite input set
// ---------------------------------------------------------------------------

struct EquivalenceResult {
    bool equivalent = true;
    std::optional<MachineState> counterexample;
    std::string reason;
};

/// Two programs are equivalent on an input set iff their traces match exactly
/// on every input; operation sequences may differ.
inline EquivalenceResult equivalent_on(const Model& model, const Program& p1, const Program& p2,
                                       const std::vector<MachineState>& inputs,
                                       long long fuel = kDefaultFuel) {
    for (const auto& s : inputs) {
        RunResult a = run(model, p1, s, "", fuel);
        RunResult b = run(model, p2, s, "", fuel);
        if (a.outcome != b.outcome || a.trace != b.trace) {
            EquivalenceResult r;
            r.equivalent = false;
            r.counterexample = s;
            r.reason = a.outcome != b.outcome
                           ? std::string("outcomes differ: ") + to_string(a.outcome) + " vs " +
                                 to_string(b.outcome)
                           : "traces diverge";
            return r;
        }
    }
    return {};
}

}  // namespace tracesynth
