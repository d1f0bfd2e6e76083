#pragma once

#include "tracesynth/model.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Traces, extended traces, lines, generalized traces
// ---------------------------------------------------------------------------

/// Path in the state space graph: the machine states of an execution.
struct Trace {
    std::vector<MachineState> states;  // non-empty

    size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
    bool operator==(const Trace& o) const { return states == o.states; }
};

/// Trace plus the operation taken at each step; gi(s_{i-1}) = s_i.
struct ExtendedTrace {
    std::vector<MachineState> states;  // s0..sn
    std::vector<std::string> ops;      // g1..gn

    size_t length() const { return ops.size(); }
    bool operator==(const ExtendedTrace& o) const { return states == o.states && ops == o.ops; }
};

/// (index, state, operation) of an extended trace; line 0 carries no
/// operation.
struct Line {
    size_t index = 0;
    MachineState state;
    std::optional<std::string> op;  // nullopt on line 0
};

inline std::vector<Line> lines_of(const ExtendedTrace& xt) {
    std::vector<Line> out;
    out.reserve(xt.states.size());
    for (size_t i = 0; i < xt.states.size(); ++i) {
        Line l;
        l.index = i;
        l.state = xt.states[i];
        if (i > 0) l.op = xt.ops[i - 1];
        out.push_back(std::move(l));
    }
    return out;
}

/// One cell of a generalized-trace row: the literal observed value and/or the
/// expression that generalizes it.
struct Cell {
    std::optional<Value> literal;
    ExprPtr expr;  // may be null
};

struct GeneralizedRow {
    std::string op_name;  // may be empty when only expressions are given
    std::map<std::string, Cell> cells;
};

/// The working artifact of trace-based development: a 0-th row holding the
/// inputs and one row per step with per-variable literal/expression cells.
/// Cells absent from a row mean the variable is unchanged at that step.
struct GeneralizedTrace {
    std::string name;  // file/diagnostic label
    MachineState input_row;
    std::vector<GeneralizedRow> rows;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct TraceStepWitness {
    size_t step = 0;  // transition from states[step] to states[step+1]
    std::vector<std::string> witnesses;
};

struct TraceValidation {
    bool valid = true;
    std::vector<TraceStepWitness> steps;
    std::optional<size_t> first_failure;  // step index
};

/// A state sequence is a trace iff every consecutive pair is connected by at
/// least one model operation. Returns all witnessing operations per step.
inline TraceValidation validate_trace(const Model& model, const std::vector<MachineState>& states) {
    TraceValidation out;
    if (states.empty()) {
        out.valid = false;
        out.first_failure = 0;
        return out;
    }
    for (size_t i = 0; i + 1 < states.size(); ++i) {
        TraceStepWitness w;
        w.step = i;
        for (const auto& op : model.operations) {
            try {
                if (apply_operation(model, states[i], op) == states[i + 1])
                    w.witnesses.push_back(op.name);
            } catch (const Error&) {
                // an operation that cannot be evaluated on this state is no witness
            }
        }
        if (w.witnesses.empty() && !out.first_failure) {
            out.valid = false;
            out.first_failure = i;
        }
        out.steps.push_back(std::move(w));
    }
    return out;
}

inline TraceValidation validate_trace(const Model& model, const Trace& t) {
    return validate_trace(model, t.states);
}

/// An extended trace is valid iff applying each named operation reproduces the
/// successor state. Zero-length extended traces are always valid.
inline bool validate_extended(const Model& model, const ExtendedTrace& xt,
                              std::optional<size_t>* first_failure = nullptr) {
    if (xt.states.size() != xt.ops.size() + 1) {
        if (first_failure) *first_failure = 0;
        return false;
    }
    for (size_t i = 0; i < xt.ops.size(); ++i) {
        bool ok = false;
        try {
            ok = apply_operation(model, xt.states[i], xt.ops[i]) == xt.states[i + 1];
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) {
            if (first_failure) *first_failure = i;
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Quotient by the first state's predicate word
// ---------------------------------------------------------------------------

/// Partition of traces by the predicate word of their first state.
/// Keys are (lenient) predicate words; classes hold indices into the input.
inline std::map<std::string, std::vector<size_t>> quotient_sim0(const Model& model,
                                                                const std::vector<Trace>& traces) {
    std::map<std::string, std::vector<size_t>> classes;
    for (size_t i = 0; i < traces.size(); ++i) {
        if (traces[i].states.empty()) fail(ErrorKind::TooShort, "empty trace");
        classes[predicate_word_lenient(model, traces[i].states.front())].push_back(i);
    }
    return classes;
}

// ---------------------------------------------------------------------------
// strip / tail
// ---------------------------------------------------------------------------

inline Trace tail(const Trace& t) {
    if (t.states.size() < 2) fail(ErrorKind::TooShort, "tail of a trace needs length >= 2");
    Trace out;
    out.states.assign(t.states.begin() + 1, t.states.end());
    return out;
}

/// Drops the operations, keeping the state sequence.
inline Trace strip(const ExtendedTrace& xt) { return Trace{xt.states}; }

/// Replays a generalized trace into the concrete state sequence. For named
/// rows the model operation is applied first, so columns the table omits
/// still progress; the row's cells then overlay it (literals take precedence
/// over expressions). Diffing literals against the operation's effect is the
/// verifier's job, not done here.
inline std::vector<MachineState> accumulate_states(const Model& model,
                                                   const GeneralizedTrace& gt) {
    std::vector<MachineState> states;
    MachineState cur = blank_state(model);
    for (const auto& [k, v] : gt.input_row.vals) cur.set(k, v);
    states.push_back(cur);
    for (const auto& row : gt.rows) {
        MachineState prev = cur;
        if (!row.op_name.empty() && model.find_operation(row.op_name)) {
            try {
                cur = apply_operation(model, prev, model.operation(row.op_name));
            } catch (const Error&) {
                cur = prev;  // unapplicable here; the cells below still count
            }
        }
        for (const auto& [var, cell] : row.cells) {
            const Variable* decl = model.find_variable(var);
            if (!decl) fail(ErrorKind::UnknownName, "trace cell for unknown variable " + var);
            if (cell.literal) {
                // a bare node id agreeing with the computed node keeps the
                // computed value, which still knows its tree
                const Value& have = cur.get(var);
                bool bare_match = cell.literal->is_node() && !cell.literal->as_node().tree &&
                                  have.is_node() && have.as_node().id == cell.literal->as_node().id;
                if (!bare_match) cur.set(var, *cell.literal);
            } else if (cell.expr) {
                cur.set(var, detail::coerce_assign(eval_expr(model, prev, *cell.expr), *decl));
            }
        }
        states.push_back(cur);
    }
    return states;
}

/// Drops the annotations of a generalized trace, keeping states and operation
/// names. Rows must be named.
inline ExtendedTrace strip(const Model& model, const GeneralizedTrace& gt) {
    ExtendedTrace xt;
    xt.states = accumulate_states(model, gt);
    for (const auto& row : gt.rows) {
        if (row.op_name.empty())
            fail(ErrorKind::UnknownName,
                 "cannot strip a generalized trace with unnamed rows (" + gt.name + ")");
        xt.ops.push_back(row.op_name);
    }
    return xt;
}

}  // namespace tracesynth
