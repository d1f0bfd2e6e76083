// tracesynth - command line front end for trace-based program synthesis.
//
// Subcommands: validate, run, synthesize, color, verify, report, export,
// fixtures. All machine-readable output is deterministic JSON on stdout.
// Exit codes: 0 success, 1 domain failure (inconsistency, violations),
// 2 usage or input errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "tracesynth/export.hpp"
#include "tracesynth/fixtures.hpp"
#include "tracesynth/io.hpp"

namespace ts = tracesynth;
namespace fs = std::filesystem;

namespace {

long long default_fuel() {
    if (const char* env = std::getenv("TRACESYNTH_FUEL")) {
        try {
            return std::stoll(env);
        } catch (...) {
            throw ts::Error(ts::ErrorKind::Format, "TRACESYNTH_FUEL is not an integer");
        }
    }
    return ts::kDefaultFuel;
}

ts::Model load_model(const std::string& path) {
    return ts::model_from_json(ts::parse_json(ts::read_file(path), path));
}

ts::Program load_program(const ts::Model& model, const std::string& path) {
    return ts::program_from_json(model, ts::parse_json(ts::read_file(path), path));
}

std::vector<ts::GeneralizedTrace> load_traces(const ts::Model& model,
                                              const std::vector<std::string>& paths) {
    std::vector<ts::GeneralizedTrace> out;
    for (const auto& p : paths)
        out.push_back(
            ts::trace_from_json(model, ts::parse_json(ts::read_file(p), p), fs::path(p).stem()));
    return out;
}

/// Aligned table rendering of a run result, one row per step.
std::string pretty_run(const ts::Model& model, const ts::RunResult& rr) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"#", "state", "op"};
    for (const auto& v : model.variables) head.push_back(v.name);
    rows.push_back(head);
    for (size_t i = 0; i < rr.trace.size(); ++i) {
        std::vector<std::string> row{std::to_string(i), rr.visited[i],
                                     i ? rr.ops[i - 1] : std::string()};
        for (const auto& v : model.variables) row.push_back(ts::to_display(rr.trace[i].get(v.name)));
        rows.push_back(row);
    }
    std::vector<size_t> width(head.size(), 0);
    for (const auto& r : rows)
        for (size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    std::string out;
    for (const auto& r : rows) {
        for (size_t c = 0; c < r.size(); ++c) {
            out += r[c];
            out += std::string(width[c] - r[c].size() + 2, ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += "\n";
    }
    out += std::string("outcome: ") + ts::to_string(rr.outcome);
    if (!rr.detail.empty()) out += " (" + rr.detail + ")";
    out += "\n";
    return out;
}

ts::Json coloring_classes_json(const ts::TraceGraph& g, const ts::Coloring& c) {
    std::map<int, ts::Json> classes;
    for (size_t v = 0; v < g.size(); ++v) {
        ts::Json entry;
        entry["trace"] = g.verts[v].trace + 1;
        entry["line"] = g.verts[v].index;
        if (g.verts[v].op) entry["op"] = *g.verts[v].op;
        classes[c.color[v]].push_back(entry);
    }
    ts::Json out = ts::Json::object();
    for (auto& [color, lines] : classes) out[std::to_string(color)] = lines;
    return out;
}

int cmd_validate(const std::string& model_path, const std::vector<std::string>& trace_paths) {
    ts::Model model = load_model(model_path);
    auto traces = load_traces(model, trace_paths);
    ts::Json report = ts::Json::array();
    bool all_ok = true;
    for (const auto& gt : traces) {
        ts::Json entry;
        entry["trace"] = gt.name;
        auto states = ts::accumulate_states(model, gt);
        auto validation = ts::validate_trace(model, states);
        entry["structure"] = ts::validation_to_json(validation);
        bool ok = validation.valid;
        bool named = !gt.rows.empty();
        for (const auto& row : gt.rows)
            if (row.op_name.empty()) named = false;
        if (named && !gt.rows.empty()) {
            ts::ExtendedTrace xt = ts::strip(model, gt);
            std::optional<size_t> fail_at;
            bool ext_ok = ts::validate_extended(model, xt, &fail_at);
            entry["extended_valid"] = ext_ok;
            if (!ext_ok && fail_at) entry["extended_failure_step"] = *fail_at;
            ok = ok && ext_ok;
        }
        bool any_expr = false;
        for (const auto& row : gt.rows)
            for (const auto& [var, cell] : row.cells)
                if (cell.expr) any_expr = true;
        if (any_expr) {
            auto gen = ts::verify_generalization(model, gt);
            entry["generalization"] = ts::generalization_report_to_json(gen);
            ok = ok && gen.ok;
        }
        entry["ok"] = ok;
        all_ok = all_ok && ok;
        report.push_back(entry);
    }
    std::cout << ts::dump_json(report);
    return all_ok ? 0 : 1;
}

int cmd_run(const std::string& model_path, const std::string& program_path,
            const std::string& input_path, const std::string& from, long long fuel, bool pretty) {
    ts::Model model = load_model(model_path);
    ts::Program program = load_program(model, program_path);
    ts::MachineState input =
        ts::state_from_json(model, ts::parse_json(ts::read_file(input_path), input_path));
    ts::RunResult rr = ts::run(model, program, input, from, fuel);
    if (pretty)
        std::cout << pretty_run(model, rr);
    else
        std::cout << ts::dump_json(ts::run_result_to_json(model, rr));
    return rr.terminated() ? 0 : 1;
}

int cmd_synthesize(const std::string& model_path, const std::vector<std::string>& trace_paths,
                   int k, bool heuristic, const std::string& out_path, bool diagnostics_only) {
    ts::Model model = load_model(model_path);
    auto gts = load_traces(model, trace_paths);
    std::vector<ts::ExtendedTrace> traces;
    for (const auto& gt : gts) traces.push_back(ts::strip(model, gt));

    ts::Json diag;
    ts::Program result;
    bool ok = true;
    if (heuristic) {
        ts::HeuristicResult h = ts::heuristic_coloring(model, traces);
        diag = ts::heuristic_report_to_json(h);
        diag["mode"] = "heuristic";
        if (h.conflicts.empty()) {
            result = ts::program_from_coloring(model, traces, h.graph, h.coloring);
            diag["classes"] = coloring_classes_json(h.graph, h.coloring);
        } else {
            ok = false;
        }
    } else if (k > 0) {
        ts::SynthesisResult sr;
        if (ts::k_consistent(model, traces, k, &sr)) {
            diag["mode"] = "fixed-k";
            diag["k"] = sr.k;
            diag["classes"] = coloring_classes_json(sr.graph, sr.coloring);
            diag["conflicts"] = ts::Json::array();
            result = sr.program;
        } else {
            diag["mode"] = "fixed-k";
            diag["k"] = k;
            diag["error"] = "trace set is not " + std::to_string(k) + "-consistent";
            ok = false;
        }
    } else {
        ts::SynthesisResult sr = ts::minimal_program(model, traces);
        diag["mode"] = "minimal";
        diag["k"] = sr.k;
        diag["classes"] = coloring_classes_json(sr.graph, sr.coloring);
        diag["conflicts"] = ts::Json::array();
        result = sr.program;
    }
    std::cout << ts::dump_json(diag);
    if (!ok) return 1;
    if (!diagnostics_only && !out_path.empty())
        ts::write_file(out_path, ts::dump_json(ts::program_to_json(model, result)));
    return 0;
}

int cmd_verify(const std::string& model_path, const std::string& program_path,
               const std::vector<std::string>& trace_paths) {
    ts::Model model = load_model(model_path);
    ts::Program program = load_program(model, program_path);
    auto gts = load_traces(model, trace_paths);
    ts::VerifyReport rep = ts::verify_edge_predicates(model, program, gts);
    std::cout << ts::dump_json(ts::verify_report_to_json(rep));
    return rep.ok() ? 0 : 1;
}

int cmd_report(const std::string& what, const std::string& model_path,
               const std::string& program_path, const std::vector<std::string>& trace_paths,
               const std::string& comments_path) {
    ts::Model model = load_model(model_path);
    ts::Program program = load_program(model, program_path);
    auto gts = load_traces(model, trace_paths);
    ts::EdgeWitnessReport rep = ts::edge_witnesses(model, program, gts);
    if (what == "witnesses") {
        std::cout << ts::dump_json(ts::witness_report_to_json(rep));
        return 0;
    }
    // missing: unwitnessed edges and unreached states. The tool cannot check
    // why an edge is justified to stay unwitnessed; user-supplied comments
    // ("FROM->TO": text) are carried through so the report documents them.
    ts::Json comments = ts::Json::object();
    if (!comments_path.empty())
        comments = ts::parse_json(ts::read_file(comments_path), comments_path);
    ts::Json j;
    ts::Json un = ts::Json::array();
    bool unexplained = false;
    for (const auto& [from, to] : rep.unwitnessed) {
        ts::Json e;
        e["from"] = from;
        e["to"] = to;
        std::string key = from + "->" + to;
        if (comments.contains(key))
            e["comment"] = comments.at(key);
        else
            unexplained = true;
        un.push_back(e);
    }
    j["unwitnessed"] = un;
    j["unreached_states"] = rep.unreached_states;
    std::cout << ts::dump_json(j);
    return !unexplained && rep.unreached_states.empty() ? 0 : 1;
}

int cmd_export(const std::string& format, const std::string& model_path,
               const std::string& program_path, bool dnf) {
    ts::RenderOptions opts;
    opts.predicates =
        dnf ? ts::RenderOptions::Predicates::WordSetAsDnf : ts::RenderOptions::Predicates::Symbolic;
    if (format == "dot")
        opts.format = ts::RenderOptions::Format::Dot;
    else if (format == "imperative")
        opts.format = ts::RenderOptions::Format::Imperative;
    else if (format == "functional")
        opts.format = ts::RenderOptions::Format::Functional;
    else
        throw ts::Error(ts::ErrorKind::Format, "unknown format " + format);
    if ((opts.format != ts::RenderOptions::Format::Dot) && model_path.empty())
        throw ts::Error(ts::ErrorKind::Format, format + " export requires --model");
    ts::Model model;
    if (!model_path.empty()) model = load_model(model_path);
    ts::Program program;
    if (model_path.empty()) {
        // DOT needs no operation definitions; parse program against an empty model
        ts::Json pj = ts::parse_json(ts::read_file(program_path), program_path);
        program.start = pj.at("start").get<std::string>();
        for (const auto& s : pj.at("states")) {
            ts::ProgramState st;
            st.name = s.at("name").get<std::string>();
            if (s.contains("op")) st.op = s.at("op").get<std::string>();
            if (s.contains("terminal")) st.terminal = s.at("terminal").get<bool>();
            if (s.contains("noop")) st.noop = s.at("noop").get<bool>();
            program.states.push_back(st);
        }
        for (const auto& e : pj.at("edges")) {
            ts::ProgramEdge ed;
            ed.from = e.at("from").get<std::string>();
            ed.to = e.at("to").get<std::string>();
            if (e.contains("when")) {
                ed.pred = ts::EdgePredicate::always_true();
                ed.pred.source = e.at("when").get<std::string>();
            } else if (e.contains("words")) {
                std::set<std::string> ws;
                for (const auto& w : e.at("words")) ws.insert(w.get<std::string>());
                ed.pred = ts::EdgePredicate::word_set(ws);
            } else {
                ed.pred = ts::EdgePredicate::word_set({});
            }
            program.edges.push_back(ed);
        }
    } else {
        program = load_program(model, program_path);
    }
    std::cout << ts::render(model, program, opts);
    return 0;
}

int cmd_fixtures_list() {
    for (const auto& name : ts::fixture_names()) std::cout << name << "\n";
    return 0;
}

int cmd_fixtures_export(const std::string& name, const std::string& dir) {
    ts::Fixture f = ts::fixture(name);
    fs::create_directories(dir);
    fs::create_directories(fs::path(dir) / "traces");
    fs::create_directories(fs::path(dir) / "inputs");
    ts::write_file((fs::path(dir) / "model.json").string(),
                   ts::dump_json(ts::model_to_json(f.model)));
    ts::write_file((fs::path(dir) / "program.json").string(),
                   ts::dump_json(ts::program_to_json(f.model, f.program)));
    for (const auto& gt : f.traces)
        ts::write_file((fs::path(dir) / "traces" / (gt.name + ".json")).string(),
                       ts::dump_json(ts::trace_to_json(f.model, gt)));
    for (const auto& [iname, input] : f.inputs)
        ts::write_file((fs::path(dir) / "inputs" / (iname + ".json")).string(),
                       ts::dump_json(ts::state_to_json(f.model, input)));
    for (const auto& [pname, prog] : f.extra_programs)
        ts::write_file((fs::path(dir) / ("program_" + pname + ".json")).string(),
                       ts::dump_json(ts::program_to_json(f.model, prog)));
    for (const auto& [dname, dt] : f.decision_trees)
        ts::write_file((fs::path(dir) / ("decision_tree_" + dname + ".json")).string(),
                       ts::dump_json(ts::decision_node_to_json(dt.root)));
    for (const auto& [rname, xt] : f.expected_runs) {
        ts::GeneralizedTrace gt = ts::expected_run_trace(xt, "expected_run_" + rname);
        ts::write_file((fs::path(dir) / "traces" / (gt.name + ".json")).string(),
                       ts::dump_json(ts::trace_to_json(f.model, gt)));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-based program synthesis toolkit"};
    app.require_subcommand(1);

    std::string model_path, program_path, input_path, out_path, from_state, format = "dot";
    std::vector<std::string> trace_paths;
    long long fuel = -1;
    int k = 0;
    bool heuristic = false, pretty = false, dnf = false;

    auto* validate = app.add_subcommand("validate", "validate traces against a model");
    validate->add_option("-m,--model", model_path, "model file")->required();
    validate->add_option("traces", trace_paths, "trace files")->required();

    auto* runc = app.add_subcommand("run", "execute a program on an input state");
    runc->add_option("-m,--model", model_path, "model file")->required();
    runc->add_option("-p,--program", program_path, "program file")->required();
    runc->add_option("--input", input_path, "input machine state file")->required();
    runc->add_option("--fuel", fuel, "step limit");
    runc->add_option("--from", from_state, "start program state");
    runc->add_flag("--pretty", pretty, "human-readable table output");

    auto* synth = app.add_subcommand("synthesize", "synthesize a program from traces");
    synth->add_option("-m,--model", model_path, "model file")->required();
    synth->add_option("traces", trace_paths, "trace files")->required();
    synth->add_option("-k", k, "exact number of program states");
    synth->add_flag("--heuristic", heuristic, "same operation = same state coloring");
    synth->add_option("-o,--output", out_path, "program output file");

    auto* color = app.add_subcommand("color", "coloring diagnostics without writing a program");
    color->add_option("-m,--model", model_path, "model file")->required();
    color->add_option("traces", trace_paths, "trace files")->required();
    color->add_option("-k", k, "exact number of program states");
    color->add_flag("--heuristic", heuristic, "same operation = same state coloring");

    auto* verify = app.add_subcommand("verify", "replay traces and check edge predicates");
    verify->add_option("-m,--model", model_path, "model file")->required();
    verify->add_option("-p,--program", program_path, "program file")->required();
    verify->add_option("traces", trace_paths, "trace files")->required();

    auto* report = app.add_subcommand("report", "edge witness reports");
    std::string what, comments_path;
    report->add_option("what", what, "witnesses|missing")
        ->required()
        ->check(CLI::IsMember({"witnesses", "missing"}));
    report->add_option("-m,--model", model_path, "model file")->required();
    report->add_option("-p,--program", program_path, "program file")->required();
    report->add_option("traces", trace_paths, "trace files")->required();
    report->add_option("--comments", comments_path,
                       "JSON map of \"FROM->TO\" to justification text for absent witnesses");

    auto* exportc = app.add_subcommand("export", "render a program");
    exportc->add_option("--format", format, "dot|imperative|functional")
        ->check(CLI::IsMember({"dot", "imperative", "functional"}));
    exportc->add_option("-p,--program", program_path, "program file")->required();
    exportc->add_option("-m,--model", model_path, "model file");
    exportc->add_flag("--dnf", dnf, "render word sets as disjunctions of conjunctions");

    auto* fixtures = app.add_subcommand("fixtures", "built-in example fixtures");
    auto* flist = fixtures->add_subcommand("list", "list fixture names");
    auto* fexport = fixtures->add_subcommand("export", "write a fixture to a directory");
    std::string fixture_name, fixture_dir;
    fexport->add_option("name", fixture_name, "fixture name")->required();
    fexport->add_option("dir", fixture_dir, "output directory")->required();
    fixtures->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fuel < 0) fuel = default_fuel();
        if (validate->parsed()) return cmd_validate(model_path, trace_paths);
        if (runc->parsed())
            return cmd_run(model_path, program_path, input_path, from_state, fuel, pretty);
        if (synth->parsed())
            return cmd_synthesize(model_path, trace_paths, k, heuristic, out_path, false);
        if (color->parsed())
            return cmd_synthesize(model_path, trace_paths, k, heuristic, "", true);
        if (verify->parsed()) return cmd_verify(model_path, program_path, trace_paths);
        if (report->parsed())
            return cmd_report(what, model_path, program_path, trace_paths, comments_path);
        if (exportc->parsed()) return cmd_export(format, model_path, program_path, dnf);
        if (flist->parsed()) return cmd_fixtures_list();
        if (fexport->parsed()) return cmd_fixtures_export(fixture_name, fixture_dir);
    } catch (const ts::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ts::ErrorKind::Format ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
