#pragma once

#include "tracesynth/expr.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Models of computation: typed variables, named parallel-assignment
// operations, named boolean predicates over an expression language with
// host-registered functions.
// ---------------------------------------------------------------------------

struct Variable {
    std::string name;
    TypeTag type;
};

/// Parallel assignment. Right-hand sides are all evaluated against the input
/// state; variables absent from the map are unchanged. Empty map is the
/// operation that leaves the state unchanged.
struct Operation {
    std::string name;
    std::map<std::string, ExprPtr> assign;

    bool same_assignments(const Operation& o) const {
        if (assign.size() != o.assign.size()) return false;
        for (const auto& [var, e] : assign) {
            auto it = o.assign.find(var);
            if (it == o.assign.end() || !expr_equal(*e, *it->second)) return false;
        }
        return true;
    }
};

struct Predicate {
    std::string name;
    ExprPtr formula;  // boolean-typed
};

struct Model {
    std::vector<Variable> variables;
    FunctionRegistry functions;
    std::vector<Operation> operations;
    std::vector<Predicate> predicates;  // declaration order fixes word bit positions
    std::vector<std::string> builtin_sets;

    const Variable* find_variable(const std::string& name) const {
        for (const auto& v : variables)
            if (v.name == name) return &v;
        return nullptr;
    }
    const Operation* find_operation(const std::string& name) const {
        for (const auto& op : operations)
            if (op.name == name) return &op;
        return nullptr;
    }
    const Operation& operation(const std::string& name) const {
        const Operation* op = find_operation(name);
        if (!op) fail(ErrorKind::UnknownName, "unknown operation " + name);
        return *op;
    }
    const Predicate* find_predicate(const std::string& name) const {
        for (const auto& p : predicates)
            if (p.name == name) return &p;
        return nullptr;
    }
    int predicate_index(const std::string& name) const {
        for (size_t i = 0; i < predicates.size(); ++i)
            if (predicates[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

inline bool valid_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Type checking
// ---------------------------------------------------------------------------

/// Infers the type of an expression against a model. Throws TypeMismatch /
/// UnknownName on ill-typed input. Numeric types (int, nat) unify to int.
inline TypeTag infer_type(const Model& model, const Expr& e) {
    using O = Expr::Op;
    using K = TypeTag::Kind;
    auto boolean = TypeTag::boolean();
    auto intty = TypeTag::intty();
    auto require = [&](const TypeTag& got, K want, const char* what) {
        if (want == K::Int ? !got.numeric() : got.kind != want)
            fail(ErrorKind::TypeMismatch, std::string("expected ") + what + " operand, got " +
                                              type_name(got) + " in '" + to_string(e) + "'");
    };
    switch (e.op) {
        case O::Lit: {
            const Value& v = e.lit;
            if (v.is_int()) return intty;
            if (v.is_bool()) return boolean;
            if (v.is_string()) return TypeTag::string();  // may also mean an enum label
            if (v.is_array()) return TypeTag::string_array();
            fail(ErrorKind::TypeMismatch, "unsupported literal");
        }
        case O::Var: {
            const Variable* var = model.find_variable(e.name);
            if (!var) fail(ErrorKind::UnknownName, "unknown variable " + e.name);
            return var->type;
        }
        case O::Call: {
            const FunctionDef& fn = model.functions.at(e.name);
            if (fn.params.size() != e.args.size())
                fail(ErrorKind::TypeMismatch, "arity mismatch for " + e.name);
            for (size_t i = 0; i < fn.params.size(); ++i) {
                TypeTag got = infer_type(model, *e.args[i]);
                bool ok = got == fn.params[i] || (got.numeric() && fn.params[i].numeric()) ||
                          (got.kind == K::String && fn.params[i].kind == K::Enum) ||
                          (got.kind == K::Enum && fn.params[i].kind == K::Enum);
                if (!ok)
                    fail(ErrorKind::TypeMismatch, "argument " + std::to_string(i + 1) + " of " +
                                                      e.name + ": expected " +
                                                      type_name(fn.params[i]) + ", got " +
                                                      type_name(got));
            }
            return fn.result;
        }
        case O::Index: {
            require(infer_type(model, *e.args[0]), K::StringArray, "string-array");
            require(infer_type(model, *e.args[1]), K::Int, "numeric");
            return TypeTag::string();
        }
        case O::Len: {
            TypeTag t = infer_type(model, *e.args[0]);
            if (t.kind != K::String && t.kind != K::StringArray)
                fail(ErrorKind::TypeMismatch, "len() expects string or string-array");
            return TypeTag::nat();
        }
        case O::Not:
            require(infer_type(model, *e.args[0]), K::Bool, "boolean");
            return boolean;
        case O::Neg:
            require(infer_type(model, *e.args[0]), K::Int, "numeric");
            return intty;
        case O::And:
        case O::Or:
            require(infer_type(model, *e.args[0]), K::Bool, "boolean");
            require(infer_type(model, *e.args[1]), K::Bool, "boolean");
            return boolean;
        case O::Add:
        case O::Sub:
        case O::Mul:
            require(infer_type(model, *e.args[0]), K::Int, "numeric");
            require(infer_type(model, *e.args[1]), K::Int, "numeric");
            return intty;
        case O::Eq:
        case O::Ne:
        case O::Lt:
        case O::Le:
        case O::Gt:
        case O::Ge: {
            TypeTag a = infer_type(model, *e.args[0]);
            TypeTag b = infer_type(model, *e.args[1]);
            bool comparable =
                a == b || (a.numeric() && b.numeric()) ||
                (a.kind == K::Enum && b.kind == K::String) ||
                (a.kind == K::String && b.kind == K::Enum);
            if (!comparable)
                fail(ErrorKind::TypeMismatch,
                     "cannot compare " + type_name(a) + " with " + type_name(b));
            bool ordered = (a.numeric() && b.numeric()) ||
                           (a.kind == K::String && b.kind == K::String);
            if (!ordered && e.op != O::Eq && e.op != O::Ne)
                fail(ErrorKind::TypeMismatch, "ordering requires numeric or string operands");
            return boolean;
        }
    }
    fail(ErrorKind::TypeMismatch, "unreachable");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Deterministic value of `e` under `state`. Boolean connectives short-circuit
/// left to right. Reading an undefined variable raises UndefinedRead.
inline Value eval_expr(const Model& model, const MachineState& state, const Expr& e) {
    using O = Expr::Op;
    auto num = [&](const Expr& sub) { return eval_expr(model, state, sub).as_int(); };
    switch (e.op) {
        case O::Lit: return e.lit;
        case O::Var: {
            if (!model.find_variable(e.name))
                fail(ErrorKind::UnknownName, "unknown variable " + e.name);
            const Value& v = state.get(e.name);
            if (v.is_undef()) fail(ErrorKind::UndefinedRead, "variable " + e.name + " is unassigned");
            return v;
        }
        case O::Call: {
            const FunctionDef& fn = model.functions.at(e.name);
            std::vector<Value> args;
            args.reserve(e.args.size());
            for (const auto& a : e.args) args.push_back(eval_expr(model, state, *a));
            return fn.fn(args);
        }
        case O::Index: {
            Value base = eval_expr(model, state, *e.args[0]);
            const auto& arr = base.as_array();
            long long idx = num(*e.args[1]);
            if (idx < 1 || idx > static_cast<long long>(arr.size()))
                fail(ErrorKind::IndexOutOfRange, "index " + std::to_string(idx) + " of array with " +
                                                     std::to_string(arr.size()) + " elements");
            return Value(arr[static_cast<size_t>(idx - 1)]);
        }
        case O::Len: {
            Value v = eval_expr(model, state, *e.args[0]);
            if (v.is_string()) return Value(static_cast<long long>(v.as_string().size()));
            return Value(static_cast<long long>(v.as_array().size()));
        }
        case O::Not: return Value(!eval_expr(model, state, *e.args[0]).as_bool());
        case O::Neg: return Value(-num(*e.args[0]));
        case O::And: {
            if (!eval_expr(model, state, *e.args[0]).as_bool()) return Value(false);
            return Value(eval_expr(model, state, *e.args[1]).as_bool());
        }
        case O::Or: {
            if (eval_expr(model, state, *e.args[0]).as_bool()) return Value(true);
            return Value(eval_expr(model, state, *e.args[1]).as_bool());
        }
        case O::Add: return Value(num(*e.args[0]) + num(*e.args[1]));
        case O::Sub: return Value(num(*e.args[0]) - num(*e.args[1]));
        case O::Mul: return Value(num(*e.args[0]) * num(*e.args[1]));
        case O::Eq:
        case O::Ne: {
            Value a = eval_expr(model, state, *e.args[0]);
            Value b = eval_expr(model, state, *e.args[1]);
            // enum-vs-string comparisons compare the label
            if (a.is_enum() && b.is_string()) a = Value(a.as_enum().label);
            if (b.is_enum() && a.is_string()) b = Value(b.as_enum().label);
            if (a.is_enum() && b.is_enum()) {
                a = Value(a.as_enum().label);
                b = Value(b.as_enum().label);
            }
            bool eq = a == b;
            return Value(e.op == O::Eq ? eq : !eq);
        }
        default: {
            Value a = eval_expr(model, state, *e.args[0]);
            Value b = eval_expr(model, state, *e.args[1]);
            bool r = false;
            if (a.is_int() && b.is_int()) {
                long long x = a.as_int(), y = b.as_int();
                r = e.op == O::Lt ? x < y : e.op == O::Le ? x <= y : e.op == O::Gt ? x > y : x >= y;
            } else {
                const std::string &x = a.as_string(), &y = b.as_string();
                r = e.op == O::Lt ? x < y : e.op == O::Le ? x <= y : e.op == O::Gt ? x > y : x >= y;
            }
            return Value(r);
        }
    }
}

namespace detail {

/// Coerce an evaluated value into the target variable's type: saturate
/// integers at the type's floor (nat saturates at 0), turn matching string
/// labels into enum values, and reject anything else.
inline Value coerce_assign(const Value& v, const Variable& var) {
    using K = TypeTag::Kind;
    if (v.is_undef()) return v;
    if (var.type.kind == K::Nat && v.is_int()) {
        long long x = v.as_int();
        return Value(x < 0 ? 0ll : x);
    }
    if (var.type.kind == K::Int && v.is_int()) {
        long long x = v.as_int();
        if (var.type.floor && x < *var.type.floor) return Value(*var.type.floor);
        return v;
    }
    if (var.type.kind == K::Enum && v.is_string()) {
        EnumValue ev{v.as_string()};
        Value coerced{ev};
        if (!value_fits(coerced, var.type))
            fail(ErrorKind::TypeMismatch, "'" + v.as_string() + "' is not a label of " +
                                              type_name(var.type));
        return coerced;
    }
    if (!value_fits(v, var.type))
        fail(ErrorKind::TypeMismatch, "value " + to_display(v) + " does not fit " +
                                          type_name(var.type) + " variable " + var.name);
    return v;
}

}  // namespace detail

/// Applies a parallel assignment: all right-hand sides are evaluated against
/// the input state, then assigned simultaneously.
inline MachineState apply_operation(const Model& model, const MachineState& state,
                                    const Operation& op) {
    std::vector<std::pair<const Variable*, Value>> staged;
    staged.reserve(op.assign.size());
    for (const auto& [target, rhs] : op.assign) {
        const Variable* var = model.find_variable(target);
        if (!var) fail(ErrorKind::UnknownName, "assignment to unknown variable " + target);
        staged.emplace_back(var, detail::coerce_assign(eval_expr(model, state, *rhs), *var));
    }
    MachineState out = state;
    for (auto& [var, val] : staged) out.set(var->name, std::move(val));
    return out;
}

inline MachineState apply_operation(const Model& model, const MachineState& state,
                                    const std::string& op_name) {
    if (op_name.empty()) return state;  // implicit empty operation
    return apply_operation(model, state, model.operation(op_name));
}

// ---------------------------------------------------------------------------
// Predicate words
// ---------------------------------------------------------------------------

/// Strict predicate word f1(s)...fk(s); raises if any predicate reads an
/// unassigned variable.
inline std::string predicate_word(const Model& model, const MachineState& state) {
    std::string w;
    w.reserve(model.predicates.size());
    for (const auto& p : model.predicates)
        w.push_back(eval_expr(model, state, *p.formula).as_bool() ? '1' : '0');
    return w;
}

/// Lenient word: predicates that cannot be evaluated on this state contribute
/// '?' instead of failing. Covers reads of unassigned variables and
/// data-dependent partiality (index range, node queries); genuine model bugs
/// (type mismatches, unknown names) still propagate. Used by the synthesis
/// machinery so traces with blank cells can be compared line by line.
inline std::string predicate_word_lenient(const Model& model, const MachineState& state) {
    std::string w;
    w.reserve(model.predicates.size());
    for (const auto& p : model.predicates) {
        try {
            w.push_back(eval_expr(model, state, *p.formula).as_bool() ? '1' : '0');
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::UndefinedRead &&
                err.kind() != ErrorKind::IndexOutOfRange && err.kind() != ErrorKind::InvalidNode)
                throw;
            w.push_back('?');
        }
    }
    return w;
}

inline bool indistinguishable(const Model& model, const MachineState& s, const MachineState& t) {
    return predicate_word(model, s) == predicate_word(model, t);
}

// ---------------------------------------------------------------------------
// Model validation
// ---------------------------------------------------------------------------

/// Checks name uniqueness/shape and type-checks every operation and predicate.
inline void validate_model(const Model& model) {
    std::set<std::string> names;
    for (const auto& v : model.variables) {
        if (!detail::valid_identifier(v.name))
            fail(ErrorKind::Format, "invalid variable name '" + v.name + "'");
        if (!names.insert(v.name).second)
            fail(ErrorKind::Format, "duplicate variable name '" + v.name + "'");
        if (v.type.kind == TypeTag::Kind::Enum) TypeTag::enumeration(v.type.labels);
    }
    std::set<std::string> ops;
    for (const auto& op : model.operations) {
        if (!ops.insert(op.name).second)
            fail(ErrorKind::Format, "duplicate operation name '" + op.name + "'");
        for (const auto& [target, rhs] : op.assign) {
            const Variable* var = model.find_variable(target);
            if (!var)
                fail(ErrorKind::UnknownName,
                     "operation " + op.name + " assigns unknown variable " + target);
            TypeTag t = infer_type(model, *rhs);
            bool ok = t == var->type || (t.numeric() && var->type.numeric()) ||
                      (t.kind == TypeTag::Kind::String && var->type.kind == TypeTag::Kind::Enum);
            if (!ok)
                fail(ErrorKind::TypeMismatch, "operation " + op.name + ": cannot assign " +
                                                  type_name(t) + " to " + type_name(var->type) +
                                                  " variable " + target);
        }
    }
    std::set<std::string> preds;
    for (const auto& p : model.predicates) {
        if (!preds.insert(p.name).second)
            fail(ErrorKind::Format, "duplicate predicate name '" + p.name + "'");
        TypeTag t = infer_type(model, *p.formula);
        if (t.kind != TypeTag::Kind::Bool)
            fail(ErrorKind::TypeMismatch, "predicate " + p.name + " is not boolean");
    }
}

/// Fresh state with every declared variable unassigned.
inline MachineState blank_state(const Model& model) {
    MachineState s;
    for (const auto& v : model.variables) s.set(v.name, Value());
    return s;
}

// ---------------------------------------------------------------------------
// Built-in k-counter machine
// ---------------------------------------------------------------------------

/// Registers R1..Rk of type nat, operations Ri+1 / Ri-1 (decrement saturates
/// at zero), predicates Ri=0 in register order.
inline Model counter_machine(int k) {
    if (k < 1) fail(ErrorKind::Format, "counter_machine requires k >= 1");
    Model m;
    for (int i = 1; i <= k; ++i) m.variables.push_back({"R" + std::to_string(i), TypeTag::nat()});
    for (int i = 1; i <= k; ++i) {
        std::string r = "R" + std::to_string(i);
        Operation inc{r + "+1", {{r, parse_expr(r + " + 1")}}};
        Operation dec{r + "-1", {{r, parse_expr(r + " - 1")}}};
        m.operations.push_back(std::move(inc));
        m.operations.push_back(std::move(dec));
    }
    for (int i = 1; i <= k; ++i) {
        std::string r = "R" + std::to_string(i);
        m.predicates.push_back({r + "=0", parse_expr(r + " = 0")});
    }
    validate_model(m);
    return m;
}

/// Convenience state for counter machines.
inline MachineState cm_state(std::vector<long long> regs) {
    MachineState s;
    for (size_t i = 0; i < regs.size(); ++i) s.set("R" + std::to_string(i + 1), Value(regs[i]));
    return s;
}

// ---------------------------------------------------------------------------
// Virtual machines VM(V, F): enumeration of assignments and predicates
// ---------------------------------------------------------------------------

namespace detail {

inline void arg_sequences(const std::vector<Variable>& vars, const std::vector<TypeTag>& params,
                          size_t at, bool allow_repeats, std::vector<std::string>& current,
                          std::vector<std::vector<std::string>>& out) {
    if (at == params.size()) {
        out.push_back(current);
        return;
    }
    for (const auto& v : vars) {
        // enumeration matches signatures exactly: distinct numeric types stay
        // distinct here, unlike expression type checking
        if (v.type != params[at]) continue;
        if (!allow_repeats &&
            std::find(current.begin(), current.end(), v.name) != current.end())
            continue;
        current.push_back(v.name);
        arg_sequences(vars, params, at + 1, allow_repeats, current, out);
        current.pop_back();
    }
}

}  // namespace detail

/// One valid single assignment: a target variable and a function application
/// whose result type matches the target.
struct SingleAssignment {
    std::string target;
    ExprPtr rhs;
    std::string text;  // canonical "target := fn(a, b)"
};

/// All valid single assignments induced by V and F. Argument variables may
/// repeat (cf. the predicate enumeration, which by default excludes repeats).
inline std::vector<SingleAssignment> enumerate_valid_assignments(
    const std::vector<Variable>& vars, const std::vector<FunctionDef>& fns) {
    std::vector<SingleAssignment> out;
    for (const auto& target : vars) {
        for (const auto& fn : fns) {
            if (fn.result != target.type) continue;
            std::vector<std::vector<std::string>> seqs;
            std::vector<std::string> cur;
            detail::arg_sequences(vars, fn.params, 0, /*allow_repeats=*/true, cur, seqs);
            for (const auto& seq : seqs) {
                std::vector<ExprPtr> args;
                for (const auto& a : seq) args.push_back(Expr::var(a));
                ExprPtr rhs = Expr::call(fn.name, std::move(args));
                out.push_back({target.name, rhs, target.name + " := " + to_string(*rhs)});
            }
        }
    }
    return out;
}

/// Number of parallel assignments = product over variables of (choices + 1).
inline long long vm_operations_count(const std::vector<Variable>& vars,
                                     const std::vector<FunctionDef>& fns) {
    auto singles = enumerate_valid_assignments(vars, fns);
    long long total = 1;
    for (const auto& v : vars) {
        long long choices = 0;
        for (const auto& s : singles)
            if (s.target == v.name) ++choices;
        total *= choices + 1;
    }
    return total;
}

/// Enumerates all parallel assignments (subsets of valid assignments with
/// distinct targets) as named operations. The empty operation is included.
inline std::vector<Operation> enumerate_parallel_assignments(
    const std::vector<Variable>& vars, const std::vector<FunctionDef>& fns) {
    auto singles = enumerate_valid_assignments(vars, fns);
    std::vector<std::vector<const SingleAssignment*>> per_var(vars.size());
    for (const auto& s : singles)
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i].name == s.target) per_var[i].push_back(&s);

    std::vector<Operation> out;
    std::vector<const SingleAssignment*> picked(vars.size(), nullptr);
    auto emit = [&]() {
        Operation op;
        std::string name;
        for (size_t i = 0; i < vars.size(); ++i) {
            if (!picked[i]) continue;
            if (!name.empty()) name += ", ";
            name += picked[i]->text;
            op.assign[picked[i]->target] = picked[i]->rhs;
        }
        op.name = name.empty() ? "nop" : name;
        out.push_back(std::move(op));
    };
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == vars.size()) {
            emit();
            return;
        }
        picked[i] = nullptr;
        rec(i + 1);
        for (const SingleAssignment* s : per_var[i]) {
            picked[i] = s;
            rec(i + 1);
        }
        picked[i] = nullptr;
    };
    rec(0);
    return out;
}

/// Predicates of VM(V, F): every function with boolean codomain applied to a
/// matching variable sequence. Repeated-variable sequences are excluded by
/// default (`allow_repeated_args` includes them).
inline std::vector<Predicate> enumerate_vm_predicates(const std::vector<Variable>& vars,
                                                      const std::vector<FunctionDef>& fns,
                                                      bool allow_repeated_args = false) {
    std::vector<Predicate> out;
    for (const auto& fn : fns) {
        if (fn.result.kind != TypeTag::Kind::Bool) continue;
        std::vector<std::vector<std::string>> seqs;
        std::vector<std::string> cur;
        detail::arg_sequences(vars, fn.params, 0, allow_repeated_args, cur, seqs);
        for (const auto& seq : seqs) {
            std::vector<ExprPtr> args;
            for (const auto& a : seq) args.push_back(Expr::var(a));
            ExprPtr f = Expr::call(fn.name, std::move(args));
            out.push_back({to_string(*f), f});
        }
    }
    return out;
}

/// Assembles the full VM(V, F) model.
inline Model make_vm_model(std::vector<Variable> vars, std::vector<FunctionDef> fns,
                           bool allow_repeated_args = false) {
    Model m;
    m.variables = std::move(vars);
    for (auto& fn : fns) m.functions.add(fn);
    m.operations = enumerate_parallel_assignments(m.variables, fns);
    m.predicates = enumerate_vm_predicates(m.variables, fns, allow_repeated_args);
    validate_model(m);
    return m;
}

}  // namespace tracesynth
