#pragma once

#include <deque>

#include "tracesynth/program.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Unmergeability matrix
//
// For extended traces X (length n) and Y (length m) the matrix U has indices
// {0..n+1} x {0..m+1}. Fixed entries: U[n+1][m+1] = 0; the rest of row n+1 and
// column m+1 is 1 (one trace ends while the other continues); row 0 and
// column 0 are 1 except U[0][0] (a 0-th line never merges with a later line).
// Interior, computed bottom-right to top-left:
//   U[i][j] = 1  iff  g_i != h_j, or s_i ~ t_j and U[i+1][j+1] = 1.
// ---------------------------------------------------------------------------

struct UMatrix {
    size_t n = 0, m = 0;
    std::vector<std::vector<uint8_t>> u;  // (n+2) x (m+2)

    bool unmergeable(size_t i, size_t j) const {
        if (i > n || j > m) fail(ErrorKind::IndexOutOfRange, "U-matrix line index");
        return u[i][j] != 0;
    }
};

inline UMatrix umatrix(const Model& model, const ExtendedTrace& X, const ExtendedTrace& Y) {
    size_t n = X.length(), m = Y.length();
    std::vector<std::string> xw, yw;
    for (const auto& s : X.states) xw.push_back(predicate_word_lenient(model, s));
    for (const auto& s : Y.states) yw.push_back(predicate_word_lenient(model, s));

    UMatrix um;
    um.n = n;
    um.m = m;
    um.u.assign(n + 2, std::vector<uint8_t>(m + 2, 0));
    for (size_t i = 0; i <= n; ++i) um.u[i][m + 1] = 1;
    for (size_t j = 0; j <= m; ++j) um.u[n + 1][j] = 1;
    um.u[n + 1][m + 1] = 0;
    for (size_t j = 1; j <= m; ++j) um.u[0][j] = 1;
    for (size_t i = 1; i <= n; ++i) um.u[i][0] = 1;
    for (size_t i = n; i >= 1; --i) {
        for (size_t j = m; j >= 1; --j) {
            bool diff_op = X.ops[i - 1] != Y.ops[j - 1];
            um.u[i][j] = diff_op || (xw[i] == yw[j] && um.u[i + 1][j + 1]);
        }
    }
    um.u[0][0] = xw[0] == yw[0] && um.u[1][1];
    return um;
}

inline bool unmergeable(const Model& model, const ExtendedTrace& X, size_t i,
                        const ExtendedTrace& Y, size_t j) {
    return umatrix(model, X, Y).unmergeable(i, j);
}

// ---------------------------------------------------------------------------
// Trace graph G(T)
// ---------------------------------------------------------------------------

/// One vertex per line of every trace; edges join unmergeable line pairs
/// (pairs from the same trace included).
struct TraceGraph {
    struct Vertex {
        int trace = 0;
        int index = 0;
        std::optional<std::string> op;  // nullopt on 0-lines
        std::string word;               // lenient predicate word
        bool last = false;
        int succ = -1;  // vertex id of the next line, -1 on last lines
    };

    std::vector<Vertex> verts;
    std::vector<int> offsets;             // per trace, id of its 0-line
    std::vector<std::vector<bool>> adj;   // symmetric

    int vertex_id(int trace, int index) const { return offsets[trace] + index; }
    size_t size() const { return verts.size(); }
    bool adjacent(int a, int b) const { return adj[a][b]; }
};

inline TraceGraph trace_graph(const Model& model, const std::vector<ExtendedTrace>& traces) {
    TraceGraph g;
    for (size_t t = 0; t < traces.size(); ++t) {
        g.offsets.push_back(static_cast<int>(g.verts.size()));
        const auto& xt = traces[t];
        for (size_t i = 0; i < xt.states.size(); ++i) {
            TraceGraph::Vertex v;
            v.trace = static_cast<int>(t);
            v.index = static_cast<int>(i);
            if (i > 0) v.op = xt.ops[i - 1];
            v.word = predicate_word_lenient(model, xt.states[i]);
            v.last = i + 1 == xt.states.size();
            v.succ = v.last ? -1 : static_cast<int>(g.verts.size()) + 1;
            g.verts.push_back(std::move(v));
        }
    }
    size_t n = g.verts.size();
    g.adj.assign(n, std::vector<bool>(n, false));
    for (size_t a = 0; a < traces.size(); ++a) {
        for (size_t b = a; b < traces.size(); ++b) {
            UMatrix um = umatrix(model, traces[a], traces[b]);
            for (size_t i = 0; i <= um.n; ++i) {
                for (size_t j = 0; j <= um.m; ++j) {
                    if (a == b && i == j) continue;
                    if (!um.unmergeable(i, j)) continue;
                    int va = g.vertex_id(static_cast<int>(a), static_cast<int>(i));
                    int vb = g.vertex_id(static_cast<int>(b), static_cast<int>(j));
                    g.adj[va][vb] = g.adj[vb][va] = true;
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Restricted colorings
// ---------------------------------------------------------------------------

struct Coloring {
    std::vector<int> color;  // per vertex id, colors in [1..k]
    int k = 0;
};

/// Definition check: proper, and every same-color pair with indistinguishable
/// states either continues to same-color successors or consists of two last
/// lines. Returns a description of the first violation, if any.
inline std::optional<std::string> coloring_violation(const TraceGraph& g, const Coloring& c) {
    auto vname = [&](int v) {
        return "v(" + std::to_string(g.verts[v].trace + 1) + "," +
               std::to_string(g.verts[v].index) + ")";
    };
    for (size_t a = 0; a < g.size(); ++a) {
        if (c.color[a] < 1 || c.color[a] > c.k) return "color out of range at " + vname((int)a);
        for (size_t b = a + 1; b < g.size(); ++b) {
            if (c.color[a] != c.color[b]) continue;
            if (g.adjacent((int)a, (int)b))
                return "adjacent vertices " + vname((int)a) + ", " + vname((int)b) +
                       " share color " + std::to_string(c.color[a]);
            const auto& va = g.verts[a];
            const auto& vb = g.verts[b];
            if (va.word != vb.word) continue;
            if (va.last != vb.last)
                return "restriction: " + vname((int)a) + " and " + vname((int)b) +
                       " share color and word but only one is last";
            if (!va.last && c.color[va.succ] != c.color[vb.succ])
                return "restriction: successors of " + vname((int)a) + " and " + vname((int)b) +
                       " have different colors";
        }
    }
    return std::nullopt;
}

namespace detail {

/// Backtracking search for a restricted k-coloring. All 0-lines are merged
/// into one class up front. Merging two same-color vertices with equal words
/// forces their successors together; the forcing is kept as a union-find
/// closure so chains of merges propagate before the next decision.
class ColoringSearch {
public:
    ColoringSearch(const TraceGraph& g, int k) : g_(g), k_(k) {
        size_t n = g.size();
        parent_.resize(n);
        for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
        root_color_.assign(n, 0);
        for (size_t v = 0; v < n; ++v)
            if (g.verts[v].index > 0) order_.push_back(static_cast<int>(v));
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            const auto& va = g.verts[a];
            const auto& vb = g.verts[b];
            if (*va.op != *vb.op) return *va.op < *vb.op;
            if (va.trace != vb.trace) return va.trace < vb.trace;
            return va.index < vb.index;
        });
    }

    std::optional<Coloring> solve() {
        // merge all 0-lines and give them color 1
        for (size_t t = 1; t < g_.offsets.size(); ++t)
            if (!do_union(find(g_.offsets[0]), find(g_.offsets[t]))) return std::nullopt;
        if (!g_.offsets.empty()) {
            if (!do_color(find(g_.offsets[0]), 1)) return std::nullopt;
        }
        if (!process()) return std::nullopt;
        if (!decide()) return std::nullopt;
        Coloring c;
        c.k = k_;
        c.color.resize(g_.size());
        for (size_t v = 0; v < g_.size(); ++v) c.color[v] = root_color_[find((int)v)];
        return c;
    }

private:
    struct TrailEntry {
        enum class Kind { Union, Color } kind;
        int a = 0;  // Union: the root that was attached; Color: the root
    };

    const TraceGraph& g_;
    int k_;
    std::vector<int> parent_;
    std::vector<int> root_color_;
    std::vector<int> order_;
    std::vector<TrailEntry> trail_;
    std::deque<int> queue_;  // roots whose classes changed

    int find(int x) const {
        while (parent_[x] != x) x = parent_[x];
        return x;
    }

    int color_of(int v) const { return root_color_[find(v)]; }

    bool do_color(int root, int c) {
        if (root_color_[root] == c) return true;
        if (root_color_[root] != 0) return false;
        root_color_[root] = c;
        trail_.push_back({TrailEntry::Kind::Color, root});
        queue_.push_back(root);
        return true;
    }

    bool do_union(int a, int b) {
        if (a == b) return true;
        int ca = root_color_[a], cb = root_color_[b];
        if (ca != 0 && cb != 0 && ca != cb) return false;
        parent_[b] = a;
        trail_.push_back({TrailEntry::Kind::Union, b});
        if (ca == 0 && cb != 0) {
            root_color_[a] = cb;
            trail_.push_back({TrailEntry::Kind::Color, a});
        }
        queue_.push_back(a);
        return true;
    }

    /// Fixpoint over pending class changes: checks properness and the
    /// restriction, scheduling successor unions as needed.
    bool process() {
        while (!queue_.empty()) {
            int r = queue_.front();
            queue_.pop_front();
            if (find(r) != r) continue;  // stale
            std::vector<int> members;
            for (size_t v = 0; v < g_.size(); ++v)
                if (find((int)v) == r) members.push_back((int)v);
            int c = root_color_[r];
            // intra-class pairs
            if (!check_pairs(members, members, true)) return false;
            if (c != 0) {
                for (size_t v = 0; v < g_.size(); ++v) {
                    int r2 = find((int)v);
                    if (r2 == r || root_color_[r2] != c || parent_[(size_t)v] != (int)v) continue;
                    std::vector<int> other;
                    for (size_t w = 0; w < g_.size(); ++w)
                        if (find((int)w) == r2) other.push_back((int)w);
                    if (!check_pairs(members, other, false)) return false;
                }
            }
        }
        return true;
    }

    bool check_pairs(const std::vector<int>& xs, const std::vector<int>& ys, bool same_class) {
        for (size_t i = 0; i < xs.size(); ++i) {
            size_t j0 = same_class ? i + 1 : 0;
            for (size_t j = j0; j < ys.size(); ++j) {
                int u = xs[i], w = ys[j];
                if (u == w) continue;
                if (g_.adjacent(u, w)) return false;
                const auto& vu = g_.verts[u];
                const auto& vw = g_.verts[w];
                if (vu.word != vw.word) continue;
                if (vu.last != vw.last) return false;
                if (!vu.last && !do_union(find(vu.succ), find(vw.succ))) return false;
            }
        }
        return true;
    }

    void rollback(size_t mark) {
        while (trail_.size() > mark) {
            TrailEntry e = trail_.back();
            trail_.pop_back();
            if (e.kind == TrailEntry::Kind::Union)
                parent_[e.a] = e.a;
            else
                root_color_[e.a] = 0;
        }
        queue_.clear();
    }

    bool decide() {
        int v = -1;
        for (int cand : order_)
            if (color_of(cand) == 0) {
                v = cand;
                break;
            }
        if (v < 0) return true;
        int used = 0;
        for (size_t i = 0; i < g_.size(); ++i)
            if (parent_[i] == (int)i) used = std::max(used, root_color_[i]);
        int limit = std::min(k_, used + 1);
        for (int c = 1; c <= limit; ++c) {
            size_t mark = trail_.size();
            if (do_color(find(v), c) && process()) {
                if (decide()) return true;
            }
            rollback(mark);
        }
        return false;
    }
};

}  // namespace detail

/// Searches for a restricted k-coloring of a trace graph; the 0-lines are
/// pre-assigned one shared color. Returns nullopt when the exhaustive search
/// fails.
inline std::optional<Coloring> restricted_coloring(const TraceGraph& g, int k) {
    if (k < 1) return std::nullopt;
    return detail::ColoringSearch(g, k).solve();
}

// ---------------------------------------------------------------------------
// Program construction from a coloring (the constructive direction of the
// coloring theorem)
// ---------------------------------------------------------------------------

/// Builds the program induced by a restricted coloring: one state per color,
/// operation labels from the colored lines, edges between consecutive-line
/// colors, edge predicates as the word sets of the source lines.
inline Program program_from_coloring(const Model& model, const std::vector<ExtendedTrace>& traces,
                                     const TraceGraph& g, const Coloring& c) {
    (void)model;
    (void)traces;  // the graph already carries every line's word and operation
    if (c.color.size() != g.size())
        fail(ErrorKind::InvalidColoring, "coloring size does not match trace graph");
    if (auto why = coloring_violation(g, c)) fail(ErrorKind::InvalidColoring, *why);
    for (size_t t = 1; t < g.offsets.size(); ++t)
        if (c.color[g.offsets[t]] != c.color[g.offsets[0]])
            fail(ErrorKind::InvalidColoring, "0-lines must share one color");

    int start_color = g.offsets.empty() ? 1 : c.color[g.offsets[0]];

    // deterministic state names: scan lines in trace order, name classes by
    // their operation, numbering repeats
    std::map<int, std::string> state_name;
    std::map<std::string, int> op_uses;
    state_name[start_color] = "Start";
    for (size_t v = 0; v < g.size(); ++v) {
        int col = c.color[v];
        if (state_name.count(col)) continue;
        std::string base = g.verts[v].op ? *g.verts[v].op : "state";
        if (base.empty()) base = "noop";
        int n = ++op_uses[base];
        state_name[col] = n == 1 ? base : base + "#" + std::to_string(n);
    }

    Program p;
    p.start = "Start";
    std::vector<int> color_order;
    for (size_t v = 0; v < g.size(); ++v)
        if (std::find(color_order.begin(), color_order.end(), c.color[v]) == color_order.end())
            color_order.push_back(c.color[v]);

    for (int col : color_order) {
        ProgramState st;
        st.name = state_name[col];
        if (col != start_color) {
            for (size_t v = 0; v < g.size(); ++v)
                if (c.color[v] == col && g.verts[v].op) {
                    st.op = *g.verts[v].op;
                    break;
                }
        }
        p.states.push_back(std::move(st));
    }

    // edge (u, v) with word w for every consecutive line pair
    std::map<std::pair<int, int>, std::set<std::string>> edge_words;
    for (size_t v = 0; v < g.size(); ++v) {
        const auto& vert = g.verts[v];
        if (vert.last) continue;
        edge_words[{c.color[v], c.color[vert.succ]}].insert(vert.word);
    }
    for (int from : color_order) {
        for (int to : color_order) {
            auto it = edge_words.find({from, to});
            if (it == edge_words.end()) continue;
            p.edges.push_back(
                {state_name[from], state_name[to], EdgePredicate::word_set(it->second)});
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Consistency of plain trace sets (with tree-program witness)
// ---------------------------------------------------------------------------

struct ConsistencyResult {
    bool consistent = true;
    Program witness;                    // reproduces every trace when consistent
    std::vector<size_t> failing_class;  // indices into the input trace set
    std::string reason;
};

namespace detail {

struct SuffixItem {
    size_t trace;
    size_t offset;
};

inline void p_add_state(Program& prog, const std::string& name, const std::string& op) {
    ProgramState st;
    st.name = name;
    st.op = op;
    prog.states.push_back(std::move(st));
}

inline bool build_tree_program(const Model& model, const std::vector<Trace>& traces,
                               const std::vector<SuffixItem>& items, const std::string& parent,
                               Program& prog, int& counter, ConsistencyResult& res) {
    // group by the predicate word of the current first state
    std::map<std::string, std::vector<SuffixItem>> classes;
    for (const auto& it : items)
        classes[predicate_word_lenient(model, traces[it.trace].states[it.offset])].push_back(it);
    for (const auto& [word, members] : classes) {
        bool any_last = false, any_more = false;
        for (const auto& it : members) {
            if (it.offset + 1 == traces[it.trace].states.size())
                any_last = true;
            else
                any_more = true;
        }
        if (any_last && any_more) {
            res.consistent = false;
            for (const auto& it : members) res.failing_class.push_back(it.trace);
            res.reason = "class with word " + word +
                         " mixes one-element and longer trace suffixes";
            return false;
        }
        if (any_last) continue;  // execution stops here: no edge accepts this word
        const Operation* common = nullptr;
        for (const auto& op : model.operations) {
            bool works = true;
            for (const auto& it : members) {
                try {
                    works = apply_operation(model, traces[it.trace].states[it.offset], op) ==
                            traces[it.trace].states[it.offset + 1];
                } catch (const Error&) {
                    works = false;
                }
                if (!works) break;
            }
            if (works) {
                common = &op;
                break;
            }
        }
        if (!common) {
            res.consistent = false;
            for (const auto& it : members) res.failing_class.push_back(it.trace);
            res.reason = "no single operation maps all first states of word class " + word;
            return false;
        }
        std::string v = "n" + std::to_string(++counter);
        p_add_state(prog, v, common->name);
        prog.edges.push_back({parent, v, EdgePredicate::word_set({word})});
        std::vector<SuffixItem> next;
        for (const auto& it : members) next.push_back({it.trace, it.offset + 1});
        if (!build_tree_program(model, traces, next, v, prog, counter, res)) return false;
    }
    return true;
}

}  // namespace detail

/// Recursive consistency criterion over the quotient by the first state's
/// predicate word. On success the witness is the tree-shaped program whose
/// root edges accept exactly the class words; it reproduces every input trace.
inline ConsistencyResult is_consistent(const Model& model, const std::vector<Trace>& traces) {
    ConsistencyResult res;
    res.witness.start = "Start";
    res.witness.states.push_back({"Start", "", false, false});
    std::vector<detail::SuffixItem> items;
    for (size_t t = 0; t < traces.size(); ++t) {
        if (traces[t].states.empty()) fail(ErrorKind::TooShort, "empty trace");
        items.push_back({t, 0});
    }
    int counter = 0;
    detail::build_tree_program(model, traces, items, "Start", res.witness, counter, res);
    if (!res.consistent) {
        std::sort(res.failing_class.begin(), res.failing_class.end());
        res.failing_class.erase(std::unique(res.failing_class.begin(), res.failing_class.end()),
                                res.failing_class.end());
        res.witness = Program{};
    }
    return res;
}

/// Consistency for extended traces: within every start-word class all traces
/// must be empty, or all must continue with the same operation name; then the
/// tails must again be consistent.
inline bool extended_consistent(const Model& model, const std::vector<ExtendedTrace>& traces,
                                std::string* why = nullptr) {
    struct Item {
        size_t trace;
        size_t offset;
    };
    std::function<bool(const std::vector<Item>&)> go = [&](const std::vector<Item>& items) {
        std::map<std::string, std::vector<Item>> classes;
        for (const auto& it : items)
            classes[predicate_word_lenient(model, traces[it.trace].states[it.offset])]
                .push_back(it);
        for (const auto& [word, members] : classes) {
            bool any_last = false, any_more = false;
            std::set<std::string> first_ops;
            for (const auto& it : members) {
                if (it.offset == traces[it.trace].length())
                    any_last = true;
                else {
                    any_more = true;
                    first_ops.insert(traces[it.trace].ops[it.offset]);
                }
            }
            if (any_last && any_more) {
                if (why) *why = "word class " + word + " mixes ended and continuing traces";
                return false;
            }
            if (any_last) continue;
            if (first_ops.size() > 1) {
                if (why) *why = "word class " + word + " continues with different operations";
                return false;
            }
            std::vector<Item> next;
            for (const auto& it : members) next.push_back({it.trace, it.offset + 1});
            if (!go(next)) return false;
        }
        return true;
    };
    std::vector<Item> items;
    for (size_t t = 0; t < traces.size(); ++t) items.push_back({t, 0});
    return go(items);
}

// ---------------------------------------------------------------------------
// k-consistency and minimal programs
// ---------------------------------------------------------------------------

struct SynthesisResult {
    Program program;
    Coloring coloring;
    TraceGraph graph;
    int k = 0;
};

/// True iff some program with at most k states reproduces every extended
/// trace (states and operations).
inline bool k_consistent(const Model& model, const std::vector<ExtendedTrace>& traces, int k,
                         SynthesisResult* out = nullptr) {
    if (!extended_consistent(model, traces)) return false;
    TraceGraph g = trace_graph(model, traces);
    auto coloring = restricted_coloring(g, k);
    if (!coloring) return false;
    Program p = program_from_coloring(model, traces, g, *coloring);
    for (const auto& xt : traces) {
        RunResult rr =
            run(model, p, xt.states.front(), "", static_cast<long long>(xt.length()) + 1);
        if (!rr.terminated() || rr.trace != xt.states || rr.ops != xt.ops) return false;
    }
    if (out) {
        out->program = std::move(p);
        out->coloring = *coloring;
        out->graph = std::move(g);
        out->k = k;
    }
    return true;
}

inline int coloring_lower_bound(const std::vector<ExtendedTrace>& traces) {
    std::set<std::string> ops;
    for (const auto& xt : traces)
        for (const auto& op : xt.ops) ops.insert(op);
    return 1 + static_cast<int>(ops.size());
}

/// Smallest program producing the trace set, found by scanning k upward from
/// the different-operations clique bound.
inline SynthesisResult minimal_program(const Model& model,
                                       const std::vector<ExtendedTrace>& traces) {
    std::string why;
    if (!extended_consistent(model, traces, &why))
        fail(ErrorKind::Inconsistent, "trace set admits no program: " + why);
    size_t total_lines = 0;
    for (const auto& xt : traces) total_lines += xt.states.size();
    SynthesisResult out;
    for (int k = coloring_lower_bound(traces); k <= static_cast<int>(total_lines); ++k)
        if (k_consistent(model, traces, k, &out)) return out;
    fail(ErrorKind::Inconsistent, "no restricted coloring up to the total line count");
}

// ---------------------------------------------------------------------------
// Heuristic coloring: same operation <=> same color
// ---------------------------------------------------------------------------

struct HeuristicConflict {
    enum class Kind { Properness, Restriction } kind;
    std::pair<int, int> a;  // (trace, index)
    std::pair<int, int> b;
    std::string detail;
};

struct HeuristicResult {
    Coloring coloring;
    TraceGraph graph;
    std::map<std::string, int> color_of_op;  // start color is 1
    std::vector<HeuristicConflict> conflicts;
};

/// Colors every line by its operation name (0-lines get a reserved start
/// color) and reports exactly the pairs where the heuristic fails: adjacent
/// same-color pairs and restriction violations.
inline HeuristicResult heuristic_coloring(const Model& model,
                                          const std::vector<ExtendedTrace>& traces) {
    HeuristicResult res;
    res.graph = trace_graph(model, traces);
    const TraceGraph& g = res.graph;
    std::set<std::string> ops;
    for (const auto& xt : traces)
        for (const auto& op : xt.ops) ops.insert(op);
    int next = 2;
    for (const auto& op : ops) res.color_of_op[op] = next++;
    res.coloring.k = next - 1;
    res.coloring.color.resize(g.size());
    for (size_t v = 0; v < g.size(); ++v)
        res.coloring.color[v] = g.verts[v].op ? res.color_of_op[*g.verts[v].op] : 1;

    auto pos = [&](int v) { return std::make_pair(g.verts[v].trace + 1, g.verts[v].index); };
    for (size_t a = 0; a < g.size(); ++a) {
        for (size_t b = a + 1; b < g.size(); ++b) {
            if (res.coloring.color[a] != res.coloring.color[b]) continue;
            const auto& va = g.verts[a];
            const auto& vb = g.verts[b];
            if (g.adjacent((int)a, (int)b)) {
                res.conflicts.push_back({HeuristicConflict::Kind::Properness, pos((int)a),
                                         pos((int)b),
                                         "unmergeable lines share operation " +
                                             (va.op ? *va.op : std::string("(start)"))});
                continue;
            }
            if (va.word != vb.word) continue;
            if (va.last != vb.last) {
                res.conflicts.push_back({HeuristicConflict::Kind::Restriction, pos((int)a),
                                         pos((int)b),
                                         "same color and word but only one line is last"});
            } else if (!va.last &&
                       res.coloring.color[va.succ] != res.coloring.color[vb.succ]) {
                res.conflicts.push_back({HeuristicConflict::Kind::Restriction, pos((int)a),
                                         pos((int)b),
                                         "successors carry different operations"});
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Round trip: program -> traces -> minimal program -> equivalence
// ---------------------------------------------------------------------------

/// Runs the program on the inputs, synthesizes a minimal program from the
/// resulting extended traces, and checks equivalence on the same inputs.
inline bool roundtrip_reconstruct(const Model& model, const Program& p,
                                  const std::vector<MachineState>& inputs,
                                  long long fuel = kDefaultFuel) {
    if (inputs.empty()) return true;
    std::vector<ExtendedTrace> traces;
    for (const auto& s : inputs) {
        RunResult rr = run(model, p, s, "", fuel);
        if (!rr.terminated())
            fail(ErrorKind::Inconsistent,
                 std::string("program does not terminate cleanly: ") + to_string(rr.outcome) +
                     (rr.detail.empty() ? "" : " (" + rr.detail + ")"));
        traces.push_back({rr.trace, rr.ops});
    }
    return equivalent_on(model, p, minimal_program(model, traces).program, inputs, fuel)
        .equivalent;
}

}  // namespace tracesynth
