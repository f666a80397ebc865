#include <hipn/cli.hpp>

#include <hipn/compile.hpp>
#include <hipn/dot.hpp>
#include <hipn/ert.hpp>
#include <hipn/explore.hpp>
#include <hipn/transforms.hpp>
#include <hipn/xpn_format.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace hipn {

namespace {

enum Exit { Definitive = 0, Inconclusive = 1, Failure = 2 };

struct Options {
    std::string net_path;
    std::string target;
    std::string from;
    std::string output;
    std::string map_path;
    std::string trace_out;
    std::string trace_in;
    std::string dot_path;
    std::string transform;
    std::vector<std::string> fire_sequence;
    std::size_t max_steps = SearchBudget{}.max_steps;
    std::size_t max_depth = 0;
    unsigned threads = 1;
    std::size_t max_nodes = ErtOptions{}.max_nodes;
    std::optional<std::uint64_t> seed;
    bool transfer = false;
};

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
    if (!f) throw Error("failed writing '" + path + "'");
}

// Writes to -o when given, otherwise to the report stream.
void emit(const Options& o, std::ostream& out, const std::string& text)
{
    if (o.output.empty()) out << text;
    else write_file(o.output, text);
}

Net load_net(const Options& o)
{
    Net net = parse_xpn(read_file(o.net_path), o.net_path);
    auto diags = validate(net);
    if (has_errors(diags)) {
        std::string msg = o.net_path + ": invalid net";
        for (const auto& d : diags)
            if (d.severity == Severity::Error) msg += "\n  " + std::string(code_name(d.code)) + ": " + d.message;
        throw Error(msg);
    }
    return net;
}

Marking marking_arg(const Net& net, const std::string& text, const char* flag)
{
    return parse_marking(net, text, std::string("--") + flag);
}

SearchBudget budget(const Options& o)
{
    SearchBudget b;
    b.max_steps = o.max_steps;
    if (o.max_depth > 0) b.max_depth = o.max_depth;
    b.threads = o.threads;
    return b;
}

int run_validate(const Options& o, std::ostream& out)
{
    Net net = parse_xpn(read_file(o.net_path), o.net_path);
    auto diags = validate(net);
    for (const auto& d : diags)
        out << (d.severity == Severity::Error ? "error " : "warning ") << code_name(d.code) << ": " << d.message
            << '\n';
    if (has_errors(diags)) return Failure;
    out << "ok: " << net.place_count() << " places, " << net.transition_count() << " transitions\n";
    return Definitive;
}

int run_classify(const Options& o, std::ostream& out)
{
    NetClass c = classify(load_net(o));
    out << "class: " << c.label << '\n';
    out << "special arcs: " << (c.specials.empty() ? "none" : c.specials.letters()) << '\n';
    SpecialSet hier;
    for (Special k : {Special::Inhibitor, Special::Reset, Special::Transfer})
        if (c.specials.has(k) && c.hierarchical.has(k)) hier.add(k);
    out << "hierarchical kinds: " << (hier.empty() ? "none" : hier.letters()) << '\n';
    out << "fully hierarchical: " << (c.fully_hierarchical ? "yes" : "no") << '\n';
    out << "constrained transfer: " << (c.constrained_transfer ? "yes" : "no") << '\n';
    out << "termination decidable: " << (c.ert_eligible ? "yes" : "no") << '\n';
    return Definitive;
}

int run_fire(const Options& o, std::ostream& out)
{
    Net net = load_net(o);
    Marking m = o.from.empty() ? net.initial() : marking_arg(net, o.from, "from");
    out << "start: " << render_marking(net, m) << '\n';
    for (std::size_t i = 0; i < o.fire_sequence.size(); ++i) {
        auto t = net.find_transition(o.fire_sequence[i]);
        if (!t) throw Error("unknown transition '" + o.fire_sequence[i] + "'");
        if (!is_firable(net, m, *t))
            throw Error("step " + std::to_string(i + 1) + ": '" + o.fire_sequence[i] + "' is not firable at " +
                        render_marking(net, m));
        m = fire(net, m, *t);
        out << o.fire_sequence[i] << ": " << render_marking(net, m) << '\n';
    }
    return Definitive;
}

int report_search(const Net& net, const Options& o, const SearchResult& r, const char* yes, const char* no,
                  std::ostream& out)
{
    switch (r.verdict) {
    case SearchVerdict::Found: out << yes << '\n'; break;
    case SearchVerdict::ExhaustedStateSpace: out << no << '\n'; break;
    case SearchVerdict::NotFoundWithinBudget: out << "UNKNOWN (budget exhausted)\n"; break;
    }
    out << "expanded: " << r.expanded << "\nvisited: " << r.visited << '\n';
    if (r.trace) {
        out << "trace:\n" << trace_to_text(net, *r.trace);
        out << "reached: " << render_marking(net, r.trace->last()) << '\n';
        if (!o.trace_out.empty()) write_file(o.trace_out, trace_to_text(net, *r.trace));
    }
    return r.verdict == SearchVerdict::NotFoundWithinBudget ? Inconclusive : Definitive;
}

int run_explore(const std::string& mode, const Options& o, std::ostream& out)
{
    Net net = load_net(o);
    Marking from = o.from.empty() ? net.initial() : marking_arg(net, o.from, "from");
    if (mode == "deadlock")
        return report_search(net, o, bounded_deadlock(net, from, budget(o)), "DEADLOCK", "DEADLOCK-FREE", out);
    if (o.target.empty()) throw Error("explore " + mode + " needs --target");
    Marking target = marking_arg(net, o.target, "target");
    if (mode == "reach")
        return report_search(net, o, bounded_reach(net, from, target, budget(o)), "REACHABLE", "UNREACHABLE", out);
    if (mode == "cover")
        return report_search(net, o, bounded_cover(net, from, target, budget(o)), "COVERABLE", "NOT-COVERABLE", out);
    // backward-cover: exact, from the initial marking only
    if (!o.from.empty()) throw Error("backward-cover starts from the initial marking; drop --from");
    out << (backward_cover(net, target) == CoverVerdict::Coverable ? "COVERABLE" : "NOT-COVERABLE") << '\n';
    return Definitive;
}

int run_terminate(const Options& o, std::ostream& out)
{
    Net net = load_net(o);
    ErtOptions opts;
    opts.max_nodes = o.max_nodes;
    opts.shuffle_seed = o.seed;
    try {
        TermVerdict v = decide_termination(net, opts);
        out << verdict_to_text(net, v);
        if (!o.dot_path.empty()) write_file(o.dot_path, ert_to_dot(net, build_ert(net, opts)));
        return Definitive;
    } catch (const BudgetExhausted& e) {
        out << "UNKNOWN (" << e.what() << ")\n";
        return Inconclusive;
    }
}

std::string comment_block(const std::string& text)
{
    std::ostringstream out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out << "# " << line << '\n';
    return out.str();
}

int run_transform(const Options& o, std::ostream& out)
{
    Net net = load_net(o);
    std::optional<Marking> target;
    if (!o.target.empty()) target = marking_arg(net, o.target, "target");
    TransformResult r = apply_transform(o.transform, net, target);

    std::string text = render_xpn(r.net);
    std::string notes = "query: " + r.query.text + "\n";
    for (const Marking& m : r.query.markings) notes += "query marking: " + render_marking(r.net, m) + "\n";
    if (target && o.transform != "reach-to-dlf") {
        notes += "mapped target: " + render_marking(r.net, r.forward_map.apply(*target)) + "\n";
        if (r.alternate_map)
            notes += "mapped target (alternate): " + render_marking(r.net, r.alternate_map->apply(*target)) + "\n";
    }
    notes += "mapped initial marking: " + render_marking(r.net, r.forward_map.apply(net.initial())) + "\n";
    emit(o, out, text + comment_block(notes));
    if (!o.map_path.empty()) write_file(o.map_path, render_place_map(net, r));
    return Definitive;
}

int run_compile(const std::string& kind, const Options& o, std::ostream& out)
{
    const std::string text = read_file(o.net_path);
    if (kind == "minsky") {
        CounterMachine cm = parse_counter_machine(text, o.net_path);
        CompiledMachine c = o.transfer ? compile_minsky_transfer(cm) : compile_minsky(cm);
        emit(o, out, render_xpn(c.net) + "# cover target: " + render_marking(c.net, c.cover_target) + "\n");
        return Definitive;
    }
    PositivityNet pn = compile_positivity(parse_positivity(text, o.net_path));
    emit(o, out, render_xpn(pn.net));
    return Definitive;
}

int run_export_dot(const Options& o, std::ostream& out)
{
    Net net = load_net(o);
    std::optional<Trace> highlight;
    if (!o.trace_in.empty()) {
        Marking from = o.from.empty() ? net.initial() : marking_arg(net, o.from, "from");
        auto steps = parse_trace(net, read_file(o.trace_in), o.trace_in);
        highlight = replay(net, from, steps);
        if (!highlight) throw Error("trace '" + o.trace_in + "' does not replay on the net");
    }
    emit(o, out, export_dot(net, highlight));
    return Definitive;
}

void add_budget_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--max-steps", o.max_steps, "node expansions before giving up")->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", o.max_depth, "longest run considered (0: unbounded)");
    cmd->add_option("--threads", o.threads, "workers for successor computation")->check(CLI::Range(1u, 256u));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Analyses and transformations for Petri nets with inhibitor, reset and transfer arcs", "hipn"};
    app.require_subcommand(1);
    Options o;

    auto* validate_cmd = app.add_subcommand("validate", "report structural problems of a net");
    validate_cmd->add_option("net", o.net_path, "net file (.xpn)")->required();

    auto* classify_cmd = app.add_subcommand("classify", "report arc kinds and hierarchy");
    classify_cmd->add_option("net", o.net_path, "net file (.xpn)")->required();

    auto* fire_cmd = app.add_subcommand("fire", "fire a sequence of transitions and print each marking");
    fire_cmd->add_option("net", o.net_path, "net file (.xpn)")->required();
    fire_cmd->add_option("transitions", o.fire_sequence, "transition names in firing order");
    fire_cmd->add_option("--from", o.from, "start marking instead of the initial one");

    auto* explore_cmd = app.add_subcommand("explore", "bounded forward search or exact backward coverability");
    explore_cmd->require_subcommand(1);
    std::string explore_mode;
    for (const char* mode : {"reach", "cover", "deadlock", "backward-cover"}) {
        auto* sub = explore_cmd->add_subcommand(mode);
        sub->add_option("net", o.net_path, "net file (.xpn)")->required();
        sub->add_option("--from", o.from, "start marking instead of the initial one");
        if (std::string(mode) != "deadlock") sub->add_option("--target", o.target, "marking such as 'p1=3 p2=0'");
        if (std::string(mode) != "backward-cover") {
            add_budget_flags(sub, o);
            sub->add_option("--trace-out", o.trace_out, "write the witness run here");
        }
        sub->callback([&explore_mode, mode] { explore_mode = mode; });
    }

    auto* terminate_cmd = app.add_subcommand("terminate", "decide termination by building the reduced tree");
    terminate_cmd->add_option("net", o.net_path, "net file (.xpn)")->required();
    terminate_cmd->add_option("--max-nodes", o.max_nodes, "tree size before giving up")->check(CLI::PositiveNumber);
    terminate_cmd->add_option("--seed", o.seed, "shuffle the order in which children are explored");
    terminate_cmd->add_option("--dot", o.dot_path, "write the full tree as DOT");

    auto* transform_cmd = app.add_subcommand("transform", "apply a net transformation");
    transform_cmd->add_option("name", o.transform, "transformation")->required()->check(
        CLI::IsMember(transform_names()));
    transform_cmd->add_option("net", o.net_path, "net file (.xpn)")->required();
    transform_cmd->add_option("--target", o.target, "target marking (required by reach-to-dlf)");
    transform_cmd->add_option("-o,--output", o.output, "write the transformed net here");
    transform_cmd->add_option("--map", o.map_path, "write the marking correspondence here");

    auto* compile_cmd = app.add_subcommand("compile", "build a net from a counter machine or a matrix instance");
    compile_cmd->require_subcommand(1);
    std::string compile_kind;
    auto* minsky_cmd = compile_cmd->add_subcommand("minsky", "two-counter machine to a net");
    minsky_cmd->add_option("machine", o.net_path, "machine file")->required();
    minsky_cmd->add_flag("--transfer", o.transfer, "zero tests move the counter to a dump place");
    minsky_cmd->add_option("-o,--output", o.output, "write the net here");
    minsky_cmd->callback([&] { compile_kind = "minsky"; });
    auto* positivity_cmd = compile_cmd->add_subcommand("positivity", "matrix iteration instance to a net");
    positivity_cmd->add_option("instance", o.net_path, "instance file")->required();
    positivity_cmd->add_option("-o,--output", o.output, "write the net here");
    positivity_cmd->callback([&] { compile_kind = "positivity"; });

    auto* dot_cmd = app.add_subcommand("export-dot", "render a net for Graphviz");
    dot_cmd->add_option("net", o.net_path, "net file (.xpn)")->required();
    dot_cmd->add_option("--trace", o.trace_in, "highlight this run (one transition per line)");
    dot_cmd->add_option("--from", o.from, "start marking of the highlighted run");
    dot_cmd->add_option("-o,--output", o.output, "write the DOT text here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return Failure;
    }

    try {
        if (*validate_cmd) return run_validate(o, out);
        if (*classify_cmd) return run_classify(o, out);
        if (*fire_cmd) return run_fire(o, out);
        if (*explore_cmd) return run_explore(explore_mode, o, out);
        if (*terminate_cmd) return run_terminate(o, out);
        if (*transform_cmd) return run_transform(o, out);
        if (*compile_cmd) return run_compile(compile_kind, o, out);
        if (*dot_cmd) return run_export_dot(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return Failure;
    }
    return Failure;
}

}  // namespace hipn
