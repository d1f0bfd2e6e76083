#pragma once

#include "tracesynth/synthesis.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Step 3: generalization verification
// ---------------------------------------------------------------------------

struct CellCheck {
    size_t row = 0;  // 1-based, row 0 is the input row
    std::string var;
    bool ok = true;
    std::string detail;
};

struct GeneralizationReport {
    std::vector<CellCheck> cells;
    bool ok = true;
};

namespace detail {

/// Literal cells may carry bare node ids (no tree); those compare by id.
inline bool literal_matches(const Value& literal, const Value& computed) {
    if (literal.is_node() && computed.is_node()) {
        const NodeRef& a = literal.as_node();
        const NodeRef& b = computed.as_node();
        if (!a.tree || !b.tree) return a.id == b.id;
    }
    return literal == computed;
}

}  // namespace detail

/// Evaluates every expression cell against the accumulated state after the
/// previous row and diffs the result against the cell's literal. Evaluation
/// errors surface as cell failures, not aborts.
inline GeneralizationReport verify_generalization(const Model& model, const GeneralizedTrace& gt) {
    GeneralizationReport rep;
    MachineState cur = blank_state(model);
    for (const auto& [k, v] : gt.input_row.vals) cur.set(k, v);
    for (size_t r = 0; r < gt.rows.size(); ++r) {
        const auto& row = gt.rows[r];
        MachineState prev = cur;
        for (const auto& [var, cell] : row.cells) {
            const Variable* decl = model.find_variable(var);
            if (!decl) fail(ErrorKind::UnknownName, "trace cell for unknown variable " + var);
            std::optional<Value> computed;
            CellCheck chk;
            chk.row = r + 1;
            chk.var = var;
            if (cell.expr) {
                try {
                    computed = detail::coerce_assign(eval_expr(model, prev, *cell.expr), *decl);
                } catch (const Error& e) {
                    chk.ok = false;
                    chk.detail = e.what();
                }
                if (computed && cell.literal) {
                    if (!detail::literal_matches(*cell.literal, *computed)) {
                        chk.ok = false;
                        chk.detail = "expected literal " + to_display(*cell.literal) + ", got " +
                                     to_display(*computed);
                    }
                }
                rep.cells.push_back(chk);
                if (!chk.ok) rep.ok = false;
            }
            if (cell.literal)
                cur.set(var, *cell.literal);
            else if (computed)
                cur.set(var, *computed);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Step 4: collect and name operations
// ---------------------------------------------------------------------------

struct NamingConflict {
    enum class Kind { SameMapTwoNames, SameNameTwoMaps } kind;
    std::string detail;
};

struct CollectResult {
    std::vector<Operation> table;  // first-appearance order
    std::vector<NamingConflict> conflicts;
};

/// Groups rows by identical expression maps, attaches the names found on the
/// rows, and reports both kinds of naming conflict: one map under two names
/// (warn) and one name over two maps.
inline CollectResult collect_operations(const std::vector<GeneralizedTrace>& gts) {
    struct Group {
        std::optional<std::map<std::string, ExprPtr>> assign;
        std::vector<std::string> names;  // first name wins
    };
    std::vector<Group> groups;
    auto map_of_row = [](const GeneralizedRow& row) -> std::optional<std::map<std::string, ExprPtr>> {
        std::map<std::string, ExprPtr> m;
        for (const auto& [var, cell] : row.cells)
            if (cell.expr) m[var] = cell.expr;
        if (m.empty() && row.op_name.empty()) return std::nullopt;
        if (m.empty() && !row.op_name.empty()) return std::nullopt;  // named, map unknown
        return m;
    };
    auto same_map = [](const std::map<std::string, ExprPtr>& a,
                       const std::map<std::string, ExprPtr>& b) {
        if (a.size() != b.size()) return false;
        for (const auto& [k, e] : a) {
            auto it = b.find(k);
            if (it == b.end() || !expr_equal(*e, *it->second)) return false;
        }
        return true;
    };

    CollectResult res;
    for (const auto& gt : gts) {
        for (const auto& row : gt.rows) {
            auto m = map_of_row(row);
            Group* grp = nullptr;
            if (m) {
                for (auto& g : groups)
                    if (g.assign && same_map(*g.assign, *m)) {
                        grp = &g;
                        break;
                    }
            }
            if (!grp && !row.op_name.empty()) {
                for (auto& g : groups)
                    if (std::find(g.names.begin(), g.names.end(), row.op_name) != g.names.end()) {
                        grp = &g;
                        break;
                    }
            }
            if (!grp) {
                groups.push_back({});
                grp = &groups.back();
            }
            if (m) {
                if (!grp->assign)
                    grp->assign = *m;
                else if (!same_map(*grp->assign, *m) && !row.op_name.empty())
                    res.conflicts.push_back({NamingConflict::Kind::SameNameTwoMaps,
                                             "name " + row.op_name + " used for two maps"});
            }
            if (!row.op_name.empty() &&
                std::find(grp->names.begin(), grp->names.end(), row.op_name) == grp->names.end())
                grp->names.push_back(row.op_name);
        }
    }
    int anon = 0;
    for (auto& g : groups) {
        if (g.names.size() > 1) {
            std::string all;
            for (const auto& n : g.names) all += (all.empty() ? "" : ", ") + n;
            res.conflicts.push_back(
                {NamingConflict::Kind::SameMapTwoNames, "one operation named " + all});
        }
        Operation op;
        op.name = g.names.empty() ? "op#" + std::to_string(++anon) : g.names.front();
        if (g.assign) op.assign = *g.assign;
        res.table.push_back(std::move(op));
    }
    // distinct names over identical maps across groups cannot happen (grouped
    // by map); identical names across two groups is the SameNameTwoMaps case
    std::map<std::string, int> name_count;
    for (const auto& op : res.table) ++name_count[op.name];
    for (const auto& [name, count] : name_count)
        if (count > 1)
            res.conflicts.push_back({NamingConflict::Kind::SameNameTwoMaps,
                                     "name " + name + " labels " + std::to_string(count) +
                                         " distinct expression maps"});
    return res;
}

// ---------------------------------------------------------------------------
// Step 5: synthesize the control flow graph skeleton
// ---------------------------------------------------------------------------

/// Vertex per operation name plus Start; an edge for every two consecutive
/// row operations and from Start to every first-row operation. Edges carry no
/// predicates.
inline Program synthesize_cfg(const std::vector<GeneralizedTrace>& gts) {
    Program p;
    p.start = "Start";
    p.states.push_back({"Start", "", false, false});
    auto ensure_state = [&](const std::string& op) {
        if (!p.find_state(op)) p.states.push_back({op, op, false, false});
    };
    std::set<std::pair<std::string, std::string>> seen;
    auto add_edge = [&](const std::string& from, const std::string& to) {
        if (seen.insert({from, to}).second)
            p.edges.push_back({from, to, EdgePredicate::word_set({})});
    };
    for (const auto& gt : gts) {
        std::string prev = "Start";
        for (const auto& row : gt.rows) {
            if (row.op_name.empty())
                fail(ErrorKind::UnknownName,
                     "synthesize_cfg requires named rows (" + gt.name + ")");
            ensure_state(row.op_name);
            add_edge(prev, row.op_name);
            prev = row.op_name;
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Replay of generalized traces against a program
// ---------------------------------------------------------------------------

struct ReplayResult {
    enum class Fail { None, Structural, Ambiguous, NoopCycle };
    Fail fail = Fail::None;
    bool ok() const { return fail == Fail::None; }
    std::vector<std::string> path;  // program states, noop states included
    std::vector<MachineState> states_after;  // machine state after each path entry
    std::optional<size_t> failed_row;        // 1-based
    std::string detail;
};

namespace detail {

struct RowMatch {
    std::vector<std::string> via;  // noop states traversed before the target
    std::string target;
    MachineState after;
    bool predicates_true = false;  // every edge along the path accepted sigma
};

/// All states matching the row reachable from `cur` through noop states.
inline std::vector<RowMatch> row_candidates(const Model& model, const Program& program,
                                            const std::string& cur, const MachineState& sigma,
                                            const GeneralizedRow& row, bool& cycle) {
    std::vector<RowMatch> out;
    BitCache bits{model, sigma, {}};
    auto edge_truth = [&](const ProgramEdge* e) {
        try {
            return bits.edge_true(e->pred);
        } catch (const Error&) {
            return false;
        }
    };
    // frontier of (state, noop path, predicates true so far); noop states
    // apply the empty operation, so sigma is unchanged along the way
    struct Item {
        std::string at;
        std::vector<std::string> via;
        bool pred_true;
    };
    std::vector<Item> frontier{{cur, {}, true}};
    std::set<std::string> visited{cur};
    cycle = false;
    while (!frontier.empty()) {
        auto [at, via, pred_true] = frontier.front();
        frontier.erase(frontier.begin());
        for (const ProgramEdge* e : program.out_edges(at)) {
            const ProgramState& target = program.state(e->to);
            if (target.noop) {
                if (visited.count(target.name)) {
                    cycle = true;
                    continue;
                }
                visited.insert(target.name);
                auto via2 = via;
                via2.push_back(target.name);
                frontier.push_back({target.name, via2, pred_true && edge_truth(e)});
                continue;
            }
            MachineState after;
            bool applies = false;
            try {
                after = apply_operation(model, sigma, target.op);
                applies = true;
            } catch (const Error&) {
                applies = false;
            }
            if (!applies) continue;
            if (!row.op_name.empty()) {
                if (target.op != row.op_name) continue;
            } else {
                // unnamed row: the assigned-variable set must equal the cells
                const Operation& op = model.operation(target.op);
                std::set<std::string> assigned, cells;
                for (const auto& [k, _] : op.assign) assigned.insert(k);
                for (const auto& [k, _] : row.cells) cells.insert(k);
                if (assigned != cells) continue;
            }
            bool literals_ok = true;
            for (const auto& [var, cell] : row.cells)
                if (cell.literal && !literal_matches(*cell.literal, after.get(var)))
                    literals_ok = false;
            if (!literals_ok) continue;
            out.push_back({via, target.name, after, pred_true && edge_truth(e)});
        }
    }
    return out;
}

}  // namespace detail

/// Walks the control flow graph consuming one row per non-noop state;
/// noop-flagged states are traversed without consuming a row. Matching is by
/// row operation name when present, otherwise by the effect of the operation
/// (assigned cells and literals must agree).
inline ReplayResult replay(const Model& model, const Program& program, const GeneralizedTrace& gt,
                           const std::string& from = "") {
    ReplayResult res;
    std::string cur = from.empty() ? program.start : from;
    program.state(cur);
    MachineState sigma = blank_state(model);
    for (const auto& [k, v] : gt.input_row.vals) sigma.set(k, v);
    res.path.push_back(cur);
    res.states_after.push_back(sigma);
    for (size_t r = 0; r < gt.rows.size(); ++r) {
        bool cycle = false;
        auto matches = detail::row_candidates(model, program, cur, sigma, gt.rows[r], cycle);
        if (matches.empty()) {
            res.fail = cycle ? ReplayResult::Fail::NoopCycle : ReplayResult::Fail::Structural;
            res.failed_row = r + 1;
            res.detail = cycle ? "noop cycle while searching for row " + std::to_string(r + 1)
                               : "no reachable state matches row " + std::to_string(r + 1) +
                                     (gt.rows[r].op_name.empty() ? ""
                                                                 : " (" + gt.rows[r].op_name + ")");
            return res;
        }
        if (matches.size() > 1) {
            // several structural candidates: let the edge predicates decide
            std::vector<detail::RowMatch> by_pred;
            for (const auto& m : matches)
                if (m.predicates_true) by_pred.push_back(m);
            if (by_pred.size() == 1) {
                matches = by_pred;
            } else {
                res.fail = ReplayResult::Fail::Ambiguous;
                res.failed_row = r + 1;
                res.detail = "row " + std::to_string(r + 1) + " matches " +
                             std::to_string(matches.size()) + " states";
                return res;
            }
        }
        const auto& m = matches.front();
        for (const auto& noop : m.via) {
            res.path.push_back(noop);
            res.states_after.push_back(sigma);  // empty operation
        }
        sigma = m.after;
        cur = m.target;
        res.path.push_back(cur);
        res.states_after.push_back(sigma);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Step 7: verify edge predicates against traces
// ---------------------------------------------------------------------------

struct EdgeViolation {
    std::string trace;
    size_t row = 0;  // 1-based row consumed by the target state (0 = before first row)
    std::string from, to;
    std::string detail;
};

struct VerifyReport {
    std::vector<EdgeViolation> violations;
    std::vector<std::string> warnings;
    std::map<std::string, std::vector<std::string>> paths;  // per trace name
    bool ok() const { return violations.empty(); }
};

/// For every replayed transition the taken edge's predicate must be true and
/// every sibling edge's predicate false; for rows ending at a terminal state
/// there must be no outgoing edges. A trace ending at a non-terminal state
/// whose predicates could still fire is flagged as a warning (possible
/// truncation), not a violation.
inline VerifyReport verify_edge_predicates(const Model& model, const Program& program,
                                           const std::vector<GeneralizedTrace>& gts) {
    VerifyReport rep;
    for (const auto& gt : gts) {
        std::string label = gt.name.empty() ? "trace" : gt.name;
        ReplayResult rr = replay(model, program, gt);
        rep.paths[label] = rr.path;
        if (!rr.ok()) {
            rep.violations.push_back(
                {label, rr.failed_row.value_or(0), "", "", "replay failed: " + rr.detail});
            continue;
        }
        size_t consumed = 0;
        for (size_t i = 0; i + 1 < rr.path.size(); ++i) {
            const std::string& u = rr.path[i];
            const std::string& v = rr.path[i + 1];
            if (!program.state(v).noop) ++consumed;
            const MachineState& sigma = rr.states_after[i];
            detail::BitCache bits{model, sigma, {}};
            for (const ProgramEdge* e : program.out_edges(u)) {
                bool truth = false;
                std::string err;
                try {
                    truth = bits.edge_true(e->pred);
                } catch (const Error& ex) {
                    err = ex.what();
                }
                if (e->to == v) {
                    if (!err.empty())
                        rep.violations.push_back({label, consumed, u, v,
                                                  "taken edge predicate failed to evaluate: " +
                                                      err});
                    else if (!truth)
                        rep.violations.push_back(
                            {label, consumed, u, v,
                             "taken edge predicate is false: " + formula_text(e->pred)});
                } else if (err.empty() && truth) {
                    rep.violations.push_back({label, consumed, u, e->to,
                                              "sibling edge predicate is true: " +
                                                  formula_text(e->pred)});
                }
            }
        }
        const std::string& last = rr.path.back();
        if (!program.state(last).terminal) {
            const MachineState& sigma = rr.states_after.back();
            detail::BitCache bits{model, sigma, {}};
            for (const ProgramEdge* e : program.out_edges(last)) {
                bool truth = false;
                try {
                    truth = bits.edge_true(e->pred);
                } catch (const Error&) {
                    truth = false;
                }
                if (truth) {
                    rep.warnings.push_back(label + ": ends at non-terminal state " + last +
                                           " with edge to " + e->to +
                                           " still applicable (possible truncation)");
                    break;
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Step 6 support: edge witnesses and missing edges
// ---------------------------------------------------------------------------

struct EdgeWitnessReport {
    // operation-to-operation transitions (noop states collapsed)
    std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::string, size_t>>>
        witnesses;  // (from,to) -> (trace, 1-based from-row; 0 = input row)
    std::vector<std::pair<std::string, std::string>> unwitnessed;
    std::vector<std::string> unreached_states;
};

/// Maps every operation-to-operation transition of the program (paths through
/// noop states collapse to one transition) to the consecutive trace rows that
/// cause it; transitions with no witness and states never visited are listed.
inline EdgeWitnessReport edge_witnesses(const Model& model, const Program& program,
                                        const std::vector<GeneralizedTrace>& gts) {
    EdgeWitnessReport rep;
    // collect all collapsed transitions
    for (const auto& s : program.states) {
        if (s.noop) continue;
        std::set<std::string> seen;
        std::vector<std::string> frontier{s.name};
        while (!frontier.empty()) {
            std::string at = frontier.back();
            frontier.pop_back();
            for (const ProgramEdge* e : program.out_edges(at)) {
                const ProgramState& t = program.state(e->to);
                if (t.noop) {
                    if (seen.insert(t.name).second) frontier.push_back(t.name);
                } else {
                    rep.witnesses[{s.name, t.name}];
                }
            }
        }
    }
    std::set<std::string> reached;
    for (const auto& gt : gts) {
        std::string label = gt.name.empty() ? "trace" : gt.name;
        ReplayResult rr = replay(model, program, gt);
        if (!rr.ok())
            fail(ErrorKind::UnknownName,
                 "trace " + label + " does not replay against the program: " + rr.detail);
        size_t consumed = 0;
        std::string prev_named;
        size_t prev_row = 0;
        for (size_t i = 0; i < rr.path.size(); ++i) {
            reached.insert(rr.path[i]);
            if (program.state(rr.path[i]).noop) continue;
            if (i > 0) rep.witnesses[{prev_named, rr.path[i]}].push_back({label, prev_row});
            if (i > 0) ++consumed;
            prev_named = rr.path[i];
            prev_row = consumed;
        }
    }
    for (const auto& [edge, hits] : rep.witnesses)
        if (hits.empty()) rep.unwitnessed.push_back(edge);
    for (const auto& s : program.states)
        if (!reached.count(s.name)) rep.unreached_states.push_back(s.name);
    return rep;
}

// ---------------------------------------------------------------------------
// Decision trees (step 7 alternative notation)
// ---------------------------------------------------------------------------

/// Binary decision tree: internal nodes name predicates, the false branch is
/// the "dashed" edge, leaves name successor program states.
struct DecisionTree {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    struct Node {
        bool leaf = false;
        std::string label;  // predicate name or successor state
        NodePtr on_true, on_false;
    };
    NodePtr root;

    static NodePtr goto_state(std::string state) {
        auto n = std::make_shared<Node>();
        n->leaf = true;
        n->label = std::move(state);
        return n;
    }
    static NodePtr test(std::string pred, NodePtr t, NodePtr f) {
        auto n = std::make_shared<Node>();
        n->label = std::move(pred);
        n->on_true = std::move(t);
        n->on_false = std::move(f);
        return n;
    }
};

struct ExpandedEdge {
    std::string to;
    EdgePredicate pred;
};

namespace detail {

inline void dt_paths(const DecisionTree::NodePtr& node,
                     std::vector<std::pair<std::string, bool>>& path,
                     std::vector<std::pair<std::string, std::vector<std::pair<std::string, bool>>>>&
                         out) {
    if (node->leaf) {
        out.push_back({node->label, path});
        return;
    }
    for (const auto& [name, _] : path)
        if (name == node->label)
            fail(ErrorKind::Format, "decision tree repeats predicate " + node->label);
    path.push_back({node->label, false});
    dt_paths(node->on_false, path, out);
    path.back().second = true;
    dt_paths(node->on_true, path, out);
    path.pop_back();
}

inline ExprPtr dt_conjunction(const std::vector<std::pair<std::string, bool>>& path) {
    if (path.empty()) return Expr::literal(Value(true));
    ExprPtr acc;
    for (const auto& [name, polarity] : path) {
        ExprPtr lit = Expr::var(name);
        if (!polarity) lit = Expr::make(Expr::Op::Not, {lit});
        acc = acc ? Expr::make(Expr::Op::And, {acc, lit}) : lit;
    }
    return acc;
}

}  // namespace detail

/// For each leaf, the conjunction of predicate literals along its path
/// (negated on false branches); leaves naming the same successor are OR'd
/// together. When a program is given, leaf states must exist in it.
inline std::vector<ExpandedEdge> expand_decision_tree(const DecisionTree& dt,
                                                      const std::string& from_state,
                                                      const Program* program = nullptr) {
    (void)from_state;
    if (!dt.root) fail(ErrorKind::Format, "empty decision tree");
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, bool>>>> paths;
    std::vector<std::pair<std::string, bool>> cur;
    detail::dt_paths(dt.root, cur, paths);

    std::vector<std::string> order;
    std::map<std::string, ExprPtr> formula;
    for (const auto& [to, path] : paths) {
        if (program && !program->find_state(to))
            fail(ErrorKind::UnknownName, "decision tree leaf names unknown state " + to);
        ExprPtr conj = detail::dt_conjunction(path);
        auto it = formula.find(to);
        if (it == formula.end()) {
            order.push_back(to);
            formula[to] = conj;
        } else {
            it->second = Expr::make(Expr::Op::Or, {it->second, conj});
        }
    }
    std::vector<ExpandedEdge> out;
    for (const auto& to : order) {
        EdgePredicate p;
        p.formula = formula[to];
        p.source = to_string(*formula[to]);
        out.push_back({to, p});
    }
    return out;
}

/// Distinct predicate names appearing in a decision tree.
inline std::vector<std::string> decision_tree_predicates(const DecisionTree& dt) {
    std::vector<std::string> out;
    std::function<void(const DecisionTree::NodePtr&)> go = [&](const DecisionTree::NodePtr& n) {
        if (!n || n->leaf) return;
        if (std::find(out.begin(), out.end(), n->label) == out.end()) out.push_back(n->label);
        go(n->on_false);
        go(n->on_true);
    };
    go(dt.root);
    return out;
}

// ---------------------------------------------------------------------------
// Trace capture: execution -> generalized trace
// ---------------------------------------------------------------------------

/// Runs the program and converts the execution into a generalized trace:
/// one named row per non-noop step, cells holding the operation's assignments
/// as expressions plus the observed literals. Noop states contribute no row.
inline GeneralizedTrace record(const Model& model, const Program& program,
                               const MachineState& input, long long fuel = kDefaultFuel,
                               const std::string& name = "") {
    RunResult rr = run(model, program, input, "", fuel);
    if (!rr.terminated())
        fail(ErrorKind::Inconsistent, std::string("cannot record a trace: run ") +
                                          to_string(rr.outcome) +
                                          (rr.detail.empty() ? "" : " (" + rr.detail + ")"));
    GeneralizedTrace gt;
    gt.name = name;
    gt.input_row = input;
    for (size_t i = 0; i < rr.ops.size(); ++i) {
        const ProgramState& st = program.state(rr.visited[i + 1]);
        if (st.noop) continue;
        GeneralizedRow row;
        row.op_name = st.op;
        const Operation& op = model.operation(st.op);
        for (const auto& [var, expr] : op.assign) {
            Cell c;
            c.literal = rr.trace[i + 1].get(var);
            c.expr = expr;
            row.cells[var] = c;
        }
        gt.rows.push_back(std::move(row));
    }
    return gt;
}

}  // namespace tracesynth
