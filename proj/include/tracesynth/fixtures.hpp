#pragma once

#include "tracesynth/builtins.hpp"
#include "tracesynth/method.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Built-in fixtures: complete model/program/trace sets for the three worked
// examples shipped with the tool.
//
//   cm2_double - two-counter machine program that clears register 2 and then
//                doubles register 1 into it; includes the rerouted variant
//                that produces identical traces.
//   csm        - confidential string matching: decide whether the
//                concatenations of two string arrays are equal using only
//                lengths and substring comparisons.
//   lindell    - tree isomorphism comparison over two input trees with block
//                primitives, including the cross-comparison machinery and the
//                RET2 decision tree.
// ---------------------------------------------------------------------------

struct Fixture {
    std::string name;
    Model model;
    Program program;
    std::vector<GeneralizedTrace> traces;
    std::map<std::string, Program> extra_programs;
    std::map<std::string, DecisionTree> decision_trees;
    std::map<std::string, MachineState> inputs;
    std::map<std::string, ExtendedTrace> expected_runs;
};

namespace detail {

inline Operation make_op(const std::string& name,
                         std::vector<std::pair<std::string, std::string>> assigns) {
    Operation op;
    op.name = name;
    for (auto& [var, expr] : assigns) op.assign[var] = parse_expr(expr);
    return op;
}

inline ProgramState make_state(const std::string& name, const std::string& op, bool terminal,
                               bool noop) {
    ProgramState s;
    s.name = name;
    s.op = op;
    s.terminal = terminal;
    s.noop = noop;
    return s;
}

inline void add_edge(const Model& m, Program& p, const std::string& from, const std::string& to,
                     const std::string& when) {
    p.edges.push_back({from, to, parse_edge_formula(m, when)});
}

inline GeneralizedRow named_row(const std::string& op,
                                std::vector<std::tuple<std::string, Value, std::string>> cells) {
    GeneralizedRow row;
    row.op_name = op;
    for (auto& [var, lit, expr] : cells) {
        Cell c;
        c.literal = lit;
        if (!expr.empty()) c.expr = parse_expr(expr);
        row.cells[var] = c;
    }
    return row;
}

inline GeneralizedRow value_row(std::vector<std::pair<std::string, Value>> cells) {
    GeneralizedRow row;
    for (auto& [var, lit] : cells) {
        Cell c;
        c.literal = lit;
        row.cells[var] = c;
    }
    return row;
}

// --- cm2_double -------------------------------------------------------------

inline Fixture make_cm2_double() {
    Fixture f;
    f.name = "cm2_double";
    f.model = counter_machine(2);

    Program p;
    p.start = "Start";
    p.states = {make_state("Start", "", false, false), make_state("A1", "R2-1", false, false),
                make_state("A3", "R1-1", false, false), make_state("A4", "R2+1", false, false),
                make_state("A5", "R2+1", false, false)};
    add_edge(f.model, p, "Start", "A1", "!R2=0");
    add_edge(f.model, p, "Start", "A3", "R2=0 & !R1=0");
    add_edge(f.model, p, "A1", "A1", "!R2=0");
    add_edge(f.model, p, "A1", "A3", "R2=0 & !R1=0");
    add_edge(f.model, p, "A3", "A4", "true");
    add_edge(f.model, p, "A4", "A5", "true");
    add_edge(f.model, p, "A5", "A3", "!R1=0");
    validate_program(f.model, p);
    f.program = p;

    // the rerouted variant: extra R1-1 state between the rightmost R2+1 and
    // the left R2+1; produces the same traces
    Program v = p;
    v.states.push_back(make_state("X", "R1-1", false, false));
    for (auto& e : v.edges)
        if (e.from == "A5" && e.to == "A3") e.to = "X";
    add_edge(f.model, v, "X", "A4", "true");
    validate_program(f.model, v);
    f.extra_programs["variant"] = v;

    f.inputs["x2y1"] = cm_state({2, 1});

    ExtendedTrace doubled;
    for (auto [x, y] : std::vector<std::pair<long long, long long>>{
             {2, 1}, {2, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}, {0, 3}, {0, 4}})
        doubled.states.push_back(cm_state({x, y}));
    doubled.ops = {"R2-1", "R1-1", "R2+1", "R2+1", "R1-1", "R2+1", "R2+1"};
    f.expected_runs["x2y1"] = doubled;

    GeneralizedTrace gt;
    gt.name = "run_2_1";
    gt.input_row = cm_state({2, 1});
    gt.rows = {named_row("R2-1", {{"R2", Value(0), "R2 - 1"}}),
               named_row("R1-1", {{"R1", Value(1), "R1 - 1"}}),
               named_row("R2+1", {{"R2", Value(1), "R2 + 1"}}),
               named_row("R2+1", {{"R2", Value(2), "R2 + 1"}}),
               named_row("R1-1", {{"R1", Value(0), "R1 - 1"}}),
               named_row("R2+1", {{"R2", Value(3), "R2 + 1"}}),
               named_row("R2+1", {{"R2", Value(4), "R2 + 1"}})};
    f.traces.push_back(gt);
    return f;
}

// --- csm ---------------------------------------------------------------------

inline Model make_csm_model() {
    Model m;
    m.variables = {{"A", TypeTag::string_array()}, {"B", TypeTag::string_array()},
                   {"ca", TypeTag::intty()},       {"cb", TypeTag::intty()},
                   {"oa", TypeTag::intty()},       {"ob", TypeTag::intty()},
                   {"l", TypeTag::intty()},        {"r", TypeTag::boolean()}};
    enable_builtins(m, "strings");
    m.operations = {
        make_op("INIT", {{"ca", "1"}, {"cb", "1"}, {"oa", "0"}, {"ob", "0"}}),
        make_op("ALEN", {{"l", "len(A[ca]) - oa"}}),
        make_op("BLEN", {{"l", "len(B[cb]) - ob"}}),
        make_op("ASBN", {{"cb", "cb + 1"}, {"oa", "oa + l"}, {"ob", "0"}}),
        make_op("ANBS", {{"ca", "ca + 1"}, {"oa", "0"}, {"ob", "ob + l"}}),
        make_op("ANBN", {{"ca", "ca + 1"}, {"cb", "cb + 1"}, {"oa", "0"}, {"ob", "0"}}),
        make_op("YES", {{"r", "true"}}),
        make_op("NO", {{"r", "false"}}),
    };
    m.predicates = {
        {"EQLEN", parse_expr("total_len(A) = total_len(B)")},
        {"SS", parse_expr("substr(A[ca], oa, l) = substr(B[cb], ob, l)")},
        {"ALEQ", parse_expr("len(A[ca]) - oa <= len(B[cb]) - ob")},
        {"EOA", parse_expr("len(A[ca]) - oa = l")},
        {"EOB", parse_expr("len(B[cb]) - ob = l")},
        {"LASTA", parse_expr("ca = len(A)")},
        {"LASTB", parse_expr("cb = len(B)")},
        {"FC", parse_expr("(len(A[ca]) - oa = l) & (len(B[cb]) - ob = l) & (ca = len(A)) & "
                          "(cb = len(B))")},
    };
    validate_model(m);
    return m;
}

inline MachineState csm_input(std::vector<std::string> a, std::vector<std::string> b) {
    MachineState s;
    s.set("A", Value(std::move(a)));
    s.set("B", Value(std::move(b)));
    return s;
}

inline Fixture make_csm() {
    Fixture f;
    f.name = "csm";
    f.model = make_csm_model();

    Program p;
    p.start = "Start";
    p.states = {make_state("Start", "", false, false), make_state("INIT", "INIT", false, false),
                make_state("NOOP", "", false, true),   make_state("ALEN", "ALEN", false, false),
                make_state("BLEN", "BLEN", false, false), make_state("ANBS", "ANBS", false, false),
                make_state("ANBN", "ANBN", false, false), make_state("ASBN", "ASBN", false, false),
                make_state("YES", "YES", true, false),  make_state("NO", "NO", true, false)};
    add_edge(f.model, p, "Start", "INIT", "EQLEN");
    add_edge(f.model, p, "Start", "NO", "!EQLEN");
    add_edge(f.model, p, "INIT", "NOOP", "true");
    add_edge(f.model, p, "NOOP", "ALEN", "ALEQ");
    add_edge(f.model, p, "NOOP", "BLEN", "!ALEQ");
    add_edge(f.model, p, "ALEN", "YES", "SS & FC");
    add_edge(f.model, p, "ALEN", "NO", "!SS");
    add_edge(f.model, p, "ALEN", "ANBS", "!EOB & SS");
    add_edge(f.model, p, "ALEN", "ANBN", "EOB & SS & !FC");
    add_edge(f.model, p, "BLEN", "ASBN", "SS");
    add_edge(f.model, p, "BLEN", "NO", "!SS");
    add_edge(f.model, p, "ANBS", "NOOP", "true");
    add_edge(f.model, p, "ANBN", "NOOP", "true");
    add_edge(f.model, p, "ASBN", "NOOP", "true");
    validate_program(f.model, p);
    f.program = p;

    f.inputs["fig"] = csm_input({"abab", "ab", "ab", "ab"}, {"ab", "aba", "bab", "ab"});
    f.inputs["t3"] = csm_input({"a", "a", "a"}, {"aaa"});
    f.inputs["t4"] = csm_input({"ba", "a"}, {"b", "ab"});
    f.inputs["t5"] = csm_input({"a"}, {"aa"});
    f.inputs["w1"] = csm_input({"a"}, {"b"});
    f.inputs["w2"] = csm_input({"a", "aaa"}, {"a", "a", "a", "a"});

    // table1: the literal trace (no names, no expressions)
    GeneralizedTrace t1;
    t1.name = "table1";
    t1.input_row = f.inputs["fig"];
    t1.rows = {
        value_row({{"ca", Value(1)}, {"cb", Value(1)}, {"oa", Value(0)}, {"ob", Value(0)}}),
        value_row({{"l", Value(2)}}),
        value_row({{"cb", Value(2)}, {"oa", Value(2)}, {"ob", Value(0)}}),
        value_row({{"l", Value(2)}}),
        value_row({{"ca", Value(2)}, {"oa", Value(0)}, {"ob", Value(2)}}),
        value_row({{"l", Value(1)}}),
        value_row({{"cb", Value(3)}, {"oa", Value(1)}, {"ob", Value(0)}}),
        value_row({{"l", Value(1)}}),
        value_row({{"ca", Value(3)}, {"oa", Value(0)}, {"ob", Value(1)}}),
        value_row({{"l", Value(2)}}),
        value_row({{"ca", Value(4)}, {"cb", Value(4)}, {"oa", Value(0)}, {"ob", Value(0)}}),
        value_row({{"l", Value(2)}}),
        value_row({{"r", Value(true)}}),
    };
    f.traces.push_back(t1);

    // table2: the generalized trace for the same input
    GeneralizedTrace t2;
    t2.name = "table2";
    t2.input_row = f.inputs["fig"];
    t2.rows = {
        named_row("INIT", {{"ca", Value(1), "1"},
                           {"cb", Value(1), "1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(0), "0"}}),
        named_row("BLEN", {{"l", Value(2), "len(B[cb]) - ob"}}),
        named_row("ASBN", {{"cb", Value(2), "cb + 1"},
                           {"oa", Value(2), "oa + l"},
                           {"ob", Value(0), "0"}}),
        named_row("ALEN", {{"l", Value(2), "len(A[ca]) - oa"}}),
        named_row("ANBS", {{"ca", Value(2), "ca + 1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(2), "ob + l"}}),
        named_row("BLEN", {{"l", Value(1), "len(B[cb]) - ob"}}),
        named_row("ASBN", {{"cb", Value(3), "cb + 1"},
                           {"oa", Value(1), "oa + l"},
                           {"ob", Value(0), "0"}}),
        named_row("ALEN", {{"l", Value(1), "len(A[ca]) - oa"}}),
        named_row("ANBS", {{"ca", Value(3), "ca + 1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(1), "ob + l"}}),
        named_row("ALEN", {{"l", Value(2), "len(A[ca]) - oa"}}),
        named_row("ANBN", {{"ca", Value(4), "ca + 1"},
                           {"cb", Value(4), "cb + 1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(0), "0"}}),
        named_row("ALEN", {{"l", Value(2), "len(A[ca]) - oa"}}),
        named_row("YES", {{"r", Value(true), "true"}}),
    };
    f.traces.push_back(t2);

    GeneralizedTrace t3;
    t3.name = "table3";
    t3.input_row = f.inputs["t3"];
    t3.rows = {
        named_row("INIT", {{"ca", Value(1), "1"},
                           {"cb", Value(1), "1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(0), "0"}}),
        named_row("ALEN", {{"l", Value(1), "len(A[ca]) - oa"}}),
        named_row("ANBS", {{"ca", Value(2), "ca + 1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(1), "ob + l"}}),
        named_row("ALEN", {{"l", Value(1), "len(A[ca]) - oa"}}),
        named_row("ANBS", {{"ca", Value(3), "ca + 1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(2), "ob + l"}}),
        named_row("ALEN", {{"l", Value(1), "len(A[ca]) - oa"}}),
        named_row("YES", {{"r", Value(true), "true"}}),
    };
    f.traces.push_back(t3);

    GeneralizedTrace t4;
    t4.name = "table4";
    t4.input_row = f.inputs["t4"];
    t4.rows = {
        named_row("INIT", {{"ca", Value(1), "1"},
                           {"cb", Value(1), "1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(0), "0"}}),
        named_row("BLEN", {{"l", Value(1), "len(B[cb]) - ob"}}),
        named_row("ASBN", {{"cb", Value(2), "cb + 1"},
                           {"oa", Value(1), "oa + l"},
                           {"ob", Value(0), "0"}}),
        named_row("ALEN", {{"l", Value(1), "len(A[ca]) - oa"}}),
        named_row("ANBS", {{"ca", Value(2), "ca + 1"},
                           {"oa", Value(0), "0"},
                           {"ob", Value(1), "ob + l"}}),
        named_row("BLEN", {{"l", Value(1), "len(B[cb]) - ob"}}),
        named_row("NO", {{"r", Value(false), "false"}}),
    };
    f.traces.push_back(t4);

    GeneralizedTrace t5;
    t5.name = "table5";
    t5.input_row = f.inputs["t5"];
    t5.rows = {named_row("NO", {{"r", Value(false), "false"}})};
    f.traces.push_back(t5);

    return f;
}

// --- lindell -------------------------------------------------------------------

inline std::shared_ptr<const TreeValue> lindell_tree(const std::string& which) {
    if (which == "S1")
        return make_tree({{1, -1}, {2, 1}, {3, 2}, {4, 1}, {5, 4}, {6, 4}, {7, 6}, {8, 1},
                          {9, 8}, {10, 8}, {11, 10}, {12, 8}, {13, 12}, {14, 13}});
    if (which == "T1")
        return make_tree({{1, -1}, {2, 1}, {3, 2}, {4, 3}, {5, 2}, {6, 1}, {7, 6}, {8, 7},
                          {9, 6}, {10, 9}, {11, 10}, {12, 6}, {13, 1}, {14, 13}});
    if (which == "S2")
        return make_tree({{1, -1}, {2, 1}, {3, 2}, {4, 2}, {5, 1}, {6, 5}, {7, 6}, {8, 5}});
    if (which == "T2")
        return make_tree({{1, -1}, {2, 1}, {3, 2}, {4, 3}, {5, 1}, {6, 5}, {7, 6}, {8, 5}});
    fail(ErrorKind::UnknownFixture, "no tree " + which);
}

inline Model make_lindell_model() {
    Model m;
    TypeTag rel = TypeTag::enumeration({"lt", "eq", "gt"});
    TypeTag flag = TypeTag::enumeration({"S", "T"});
    m.variables = {{"S", TypeTag::node()},  {"T", TypeTag::node()},  {"s", TypeTag::node()},
                   {"t", TypeTag::node()},  {"k", TypeTag::nat()},   {"res", rel},
                   {"s'", TypeTag::node()}, {"t'", TypeTag::node()}, {"sgt", TypeTag::nat()},
                   {"seq", TypeTag::nat()}, {"tgt", TypeTag::nat()}, {"teq", TypeTag::nat()},
                   {"h", TypeTag::nat()},   {"f", flag},             {"stk", TypeTag::stack()}};
    enable_builtins(m, "trees");
    enable_builtins(m, "stack6");
    m.operations = {
        make_op("INIT", {{"s", "S"}, {"t", "T"}, {"k", "0"}, {"stk", "empty_stack()"}}),
        make_op("NB", {{"k", "next_block_size(s, k)"}}),
        make_op("GC", {{"s", "block_first(s, k)"}, {"t", "block_first(t, k)"}, {"k", "0"}}),
        make_op("RET", {{"s", "parent(s)"}, {"t", "parent(t)"}, {"k", "subtree_size(s)"}}),
        make_op("ISO", {{"res", "\"eq\""}}),
        make_op("LT", {{"res", "\"lt\""}}),
        make_op("GT", {{"res", "\"gt\""}}),
        make_op("SETH", {{"h", "0"}}),
        make_op("INCH", {{"h", "h + seq"}}),
        make_op("FINDS", {{"s'", "block_first(s, k)"},
                          {"t'", "block_first(t, k)"},
                          {"sgt", "0"},
                          {"seq", "0"},
                          {"tgt", "0"},
                          {"teq", "0"},
                          {"f", "\"S\""}}),
        make_op("FINDT",
                {{"s'", "block_first(s, k)"}, {"t'", "block_first(t, k)"}, {"f", "\"T\""}}),
        make_op("NXTS", {{"t'", "block_next(t')"}}),
        make_op("NXTT", {{"s'", "block_next(s')"}}),
        make_op("NCS", {{"s'", "block_next(s')"},
                        {"t'", "block_first(t, k)"},
                        {"sgt", "0"},
                        {"seq", "0"}}),
        make_op("NCT", {{"t'", "block_next(t')"},
                        {"s'", "block_first(s, k)"},
                        {"tgt", "0"},
                        {"teq", "0"}}),
        make_op("PUSH", {{"s", "s'"},
                         {"t", "t'"},
                         {"k", "0"},
                         {"stk", "push6(stk, h, sgt, seq, tgt, teq, f)"}}),
        make_op("RET2",
                {{"s", "parent(s)"},
                 {"t", "parent(t)"},
                 {"s'", "s"},
                 {"t'", "t"},
                 {"k", "subtree_size(s)"},
                 {"h", "stk_h(stk)"},
                 {"sgt", "stk_sgt(stk) + b2n(stk_f(stk) = \"S\" & res = \"gt\")"},
                 {"seq", "stk_seq(stk) + b2n(stk_f(stk) = \"S\" & res = \"eq\")"},
                 {"tgt", "stk_tgt(stk) + b2n(!(stk_f(stk) = \"S\") & res = \"lt\")"},
                 {"teq", "stk_teq(stk) + b2n(!(stk_f(stk) = \"S\") & res = \"eq\")"},
                 {"f", "stk_f(stk)"},
                 {"stk", "pop(stk)"}}),
    };
    m.predicates = {
        {"CMP1LT", parse_expr("cmp1(s, t) = \"lt\"")},
        {"CMP1GT", parse_expr("cmp1(s, t) = \"gt\"")},
        {"RESLT", parse_expr("res = \"lt\"")},
        {"RESGT", parse_expr("res = \"gt\"")},
        {"HASNB", parse_expr("has_next_block(s, k)")},
        {"CARD1", parse_expr("block_card(s, k) = 1")},
        {"ISROOT", parse_expr("is_root(s)")},
        {"PCARD1", parse_expr("block_card(parent(s), subtree_size(s)) = 1")},
        {"HLTL", parse_expr("h < block_card(s, k)")},
        {"FS", parse_expr("f = \"S\"")},
        {"SLAST", parse_expr("is_block_last(s')")},
        {"TLAST", parse_expr("is_block_last(t')")},
        {"HSGT", parse_expr("h = sgt")},
        {"HTGT", parse_expr("h = tgt")},
        {"SEQTEQ", parse_expr("seq = teq")},
        {"SEQLT", parse_expr("seq < teq")},
    };
    validate_model(m);
    return m;
}

/// Decision tree deciding the successor of RET2. The false branch is the
/// dashed edge.
inline DecisionTree lindell_ret2_tree() {
    using DT = DecisionTree;
    // looking for a node in T (f != S)
    auto seqcmp = DT::test("SEQLT", DT::goto_state("LT"), DT::goto_state("GT"));
    auto match_t = DT::test("SEQTEQ", DT::goto_state("INCH"), seqcmp);
    auto next_t = DT::test("TLAST", DT::goto_state("LT"), DT::goto_state("NCT"));
    auto t_done = DT::test("HTGT", match_t, next_t);
    auto f_is_t = DT::test("SLAST", t_done, DT::goto_state("NXTT"));
    // looking for a node in S (f = S)
    auto next_s = DT::test("SLAST", DT::goto_state("GT"), DT::goto_state("NCS"));
    auto s_done = DT::test("HSGT", DT::goto_state("FINDT"), next_s);
    auto f_is_s = DT::test("TLAST", s_done, DT::goto_state("NXTS"));
    DecisionTree dt;
    dt.root = DT::test("FS", f_is_s, f_is_t);
    return dt;
}

inline Fixture make_lindell() {
    Fixture f;
    f.name = "lindell";
    f.model = make_lindell_model();

    Program p;
    p.start = "Start";
    p.states.push_back(make_state("Start", "", false, false));
    for (const char* name : {"INIT", "NB", "GC", "RET", "ISO", "LT", "GT", "SETH", "INCH",
                             "FINDS", "FINDT", "NXTS", "NXTT", "NCS", "NCT", "PUSH", "RET2"})
        p.states.push_back(make_state(name, name, false, false));
    p.states.push_back(make_state("CMP", "", false, true));

    add_edge(f.model, p, "Start", "INIT", "true");
    add_edge(f.model, p, "INIT", "CMP", "true");
    add_edge(f.model, p, "GC", "CMP", "true");
    add_edge(f.model, p, "PUSH", "CMP", "true");
    add_edge(f.model, p, "CMP", "LT", "CMP1LT");
    add_edge(f.model, p, "CMP", "GT", "CMP1GT");
    add_edge(f.model, p, "CMP", "NB", "!CMP1LT & !CMP1GT & HASNB");
    add_edge(f.model, p, "CMP", "ISO", "!CMP1LT & !CMP1GT & !HASNB");
    add_edge(f.model, p, "RET", "LT", "RESLT");
    add_edge(f.model, p, "RET", "GT", "RESGT");
    add_edge(f.model, p, "RET", "NB", "!RESLT & !RESGT & HASNB");
    add_edge(f.model, p, "RET", "ISO", "!RESLT & !RESGT & !HASNB");
    add_edge(f.model, p, "NB", "GC", "CARD1");
    add_edge(f.model, p, "NB", "SETH", "!CARD1");
    add_edge(f.model, p, "SETH", "FINDS", "true");
    add_edge(f.model, p, "FINDS", "PUSH", "true");
    add_edge(f.model, p, "FINDT", "PUSH", "true");
    add_edge(f.model, p, "NXTS", "PUSH", "true");
    add_edge(f.model, p, "NXTT", "PUSH", "true");
    add_edge(f.model, p, "NCS", "PUSH", "true");
    add_edge(f.model, p, "NCT", "PUSH", "true");
    add_edge(f.model, p, "INCH", "FINDS", "HLTL");
    add_edge(f.model, p, "INCH", "ISO", "!HLTL");
    for (const char* outcome : {"ISO", "LT", "GT"}) {
        add_edge(f.model, p, outcome, "RET", "!ISROOT & PCARD1");
        add_edge(f.model, p, outcome, "RET2", "!ISROOT & !PCARD1");
    }
    // the RET2 dispatch comes from its decision tree
    DecisionTree ret2 = lindell_ret2_tree();
    for (const auto& edge : expand_decision_tree(ret2, "RET2"))
        p.edges.push_back({"RET2", edge.to, edge.pred});
    validate_program(f.model, p);
    f.program = p;
    f.decision_trees["ret2"] = ret2;

    auto input = [&](const std::string& sname, const std::string& tname) {
        MachineState st;
        st.set("S", Value(root_ref(lindell_tree(sname))));
        st.set("T", Value(root_ref(lindell_tree(tname))));
        return st;
    };
    f.inputs["s1t1"] = input("S1", "T1");
    f.inputs["s2t2"] = input("S2", "T2");

    // the two shipped traces are reconstructed by executing the program
    f.traces.push_back(record(f.model, f.program, f.inputs["s1t1"], kDefaultFuel, "table8"));
    f.traces.push_back(record(f.model, f.program, f.inputs["s2t2"], kDefaultFuel, "table9"));
    return f;
}

}  // namespace detail

inline std::vector<std::string> fixture_names() { return {"cm2_double", "csm", "lindell"}; }

/// The serialization shape used for expected-run fixture files: one named row
/// per step carrying the changed variables as literal cells.
inline GeneralizedTrace expected_run_trace(const ExtendedTrace& xt, const std::string& name) {
    GeneralizedTrace gt;
    gt.name = name;
    gt.input_row = xt.states.front();
    for (size_t i = 0; i < xt.ops.size(); ++i) {
        GeneralizedRow row;
        row.op_name = xt.ops[i];
        for (const auto& [var, val] : xt.states[i + 1].vals) {
            if (val == xt.states[i].get(var)) continue;
            Cell c;
            c.literal = val;
            row.cells[var] = c;
        }
        gt.rows.push_back(std::move(row));
    }
    return gt;
}

inline Fixture fixture(const std::string& name) {
    if (name == "cm2_double") return detail::make_cm2_double();
    if (name == "csm") return detail::make_csm();
    if (name == "lindell") return detail::make_lindell();
    fail(ErrorKind::UnknownFixture, "unknown fixture '" + name + "'");
}

}  // namespace tracesynth
