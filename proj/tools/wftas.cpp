// wftas: verification, expectation, simulation, trace linting and the
// tournament counterexample for the two-process randomized test-and-set.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wftas/expectation.hpp"
#include "wftas/golden.hpp"
#include "wftas/harness.hpp"
#include "wftas/linearizer.hpp"
#include "wftas/model_checker.hpp"
#include "wftas/trace_io.hpp"
#include "wftas/tournament.hpp"

using namespace wftas;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kViolation = 2;
constexpr int kInputError = 3;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("WFTAS_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("WFTAS_SEED is not a number");
        }
    }
    return 1;
}

Variant parse_variant(const std::string& s) {
    if (s == "standard") return Variant::Standard;
    if (s == "choose-rst-to-me") return Variant::ChooseRstToMe;
    throw InputError("unknown variant " + s);
}

std::string fmt(const Rational& r) {
    std::ostringstream s;
    s << r.numerator();
    if (r.denominator() != 1) s << '/' << r.denominator();
    return s.str();
}

std::string phase(bool ok) { return ok ? "PASS" : "FAIL"; }

struct CheckArgs {
    bool json = false;
    std::string table;
    std::string labels;
    std::string variant = "standard";
};

int cmd_check(const CheckArgs& args) {
    const std::string table_text = args.table.empty() ? std::string(embedded_golden_table()) : read_file(args.table);
    const std::string label_text = args.labels.empty() ? std::string(embedded_label_spec()) : read_file(args.labels);
    GoldenTable table;
    LabelSpec spec;
    try {
        table = parse_golden_table(table_text);
        spec = parse_label_spec(label_text);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    const CheckResult r = run_check(table, table_text, spec, parse_variant(args.variant));

    bool reach_ok = r.reachable.size() == table.reachable_count();
    for (const SystemConfig& c : r.reachable) reach_ok = reach_ok && table.at(c).has_value();
    const bool letters_ok = r.label_error.empty() && r.table.mismatches.empty();
    const bool symmetry_ok = r.table.symmetry_failures.empty() && r.golden.ok();
    const bool ok = reach_ok && r.ok();

    if (args.json) {
        ordered_json j;
        j["reachability"] = {{"pass", reach_ok}, {"reachable", r.reachable.size()}};
        j["confluence"] = {{"pass", r.confluent}, {"detail", r.confluence_error}};
        j["table_letters"] = {{"pass", letters_ok},
                              {"verified_cells", r.table.verified_cells},
                              {"verified_unreachable", r.table.verified_unreachable},
                              {"label_error", r.label_error}};
        j["table_letters"]["mismatches"] = ordered_json::array();
        for (const auto& m : r.table.mismatches)
            j["table_letters"]["mismatches"].push_back(
                {{"config", to_string(m.config)}, {"expected", m.expected}, {"computed", m.computed}});
        j["table_symmetry"] = {{"pass", symmetry_ok}, {"failures", r.table.symmetry_failures},
                               {"golden_errors", r.golden.errors}};
        j["induction"] = {{"pass", r.induction.empty()}, {"failures", r.induction.size()}};
        j["ambiguous_letters"] = r.labels.ambiguous;
        ordered_json cells = ordered_json::object();
        for (const auto& [c, s] : r.sets) cells[to_string(c)] = r.labels.format(s);
        j["sets"] = cells;
        std::cout << j.dump(2) << '\n';
        return ok ? kOk : kFail;
    }

    std::cout << "reachability: " << phase(reach_ok) << " (" << r.reachable.size()
              << " reachable configurations)\n";
    std::cout << "confluence: " << phase(r.confluent) << '\n';
    if (!r.confluent) std::cout << "  " << r.confluence_error << '\n';
    std::cout << "table letters: " << phase(letters_ok) << " (" << r.table.verified_cells
              << " cells verified, " << r.table.verified_unreachable << " unreachable verified)\n";
    if (!r.label_error.empty()) std::cout << "  labelling: " << r.label_error << '\n';
    for (const auto& m : r.table.mismatches)
        std::cout << "  " << to_string(m.config) << ": table " << m.expected << ", computed " << m.computed
                  << '\n';
    std::cout << "table symmetry: " << phase(symmetry_ok) << '\n';
    for (const auto& f : r.table.symmetry_failures) std::cout << "  computed sets not mirrored at " << f << '\n';
    for (const auto& e : r.golden.errors) std::cout << "  " << e << '\n';
    std::cout << "induction: " << phase(r.induction.empty()) << " (" << r.induction.size() << " failures)\n";
    for (const auto& a : r.labels.ambiguous) std::cout << "ambiguous letters: " << a << '\n';
    return ok ? kOk : kFail;
}

struct ExpectArgs {
    bool verify = false;
    bool policy = false;
    bool json = false;
    Pid tracked = 0;
    std::string table;
};

int cmd_expect(const ExpectArgs& args) {
    const ExpectationTable t = solve(args.tracked);
    auto config_for = [&](ProcState row, ProcState col) {
        return args.tracked == 0 ? SystemConfig{{row, col}} : SystemConfig{{col, row}};
    };

    if (args.policy) {
        ordered_json j;
        j["tracked"] = args.tracked;
        ordered_json pol = ordered_json::object();
        for (const auto& [c, p] : t.policy.choice) pol[to_string(c)] = p;
        j["schedule"] = pol;
        std::cout << j.dump(2) << '\n';
        return kOk;
    }

    std::vector<std::string> diffs;
    if (args.verify) {
        GoldenTable golden;
        try {
            golden = parse_golden_table(args.table.empty() ? std::string(embedded_golden_table())
                                                           : read_file(args.table));
        } catch (const GoldenError& e) {
            throw InputError(e.what());
        }
        for (ProcState row : kAllStates)
            for (ProcState col : kAllStates) {
                const auto& cell = golden.at(SystemConfig{{row, col}});
                auto it = t.value.find(config_for(row, col));
                const std::string want = cell ? std::to_string(cell->value) : "*";
                const std::string got = it != t.value.end() ? fmt(it->second) : "*";
                if (want != got)
                    diffs.push_back("(" + std::string(to_string(row)) + "," + std::string(to_string(col)) +
                                    "): table " + want + ", computed " + got);
            }
    }

    if (args.json) {
        ordered_json j;
        j["tracked"] = args.tracked;
        j["max"] = fmt(t.max());
        ordered_json vals = ordered_json::object();
        for (const auto& [c, v] : t.value) vals[to_string(c)] = fmt(v);
        j["values"] = vals;
        if (args.verify) j["verify"] = {{"pass", diffs.empty()}, {"differences", diffs}};
        std::cout << j.dump(2) << '\n';
        return diffs.empty() ? kOk : kFail;
    }

    std::cout << "rows: state of tracked process P" << args.tracked << ", columns: state of P"
              << 1 - args.tracked << '\n';
    std::cout << std::setw(8) << "";
    for (ProcState col : kAllStates) std::cout << std::setw(7) << to_string(col);
    std::cout << '\n';
    for (ProcState row : kAllStates) {
        std::cout << std::setw(8) << std::left << to_string(row) << std::right;
        for (ProcState col : kAllStates) {
            auto it = t.value.find(config_for(row, col));
            std::cout << std::setw(7) << (it != t.value.end() ? fmt(it->second) : "*");
        }
        std::cout << '\n';
    }
    std::cout << "max " << fmt(t.max()) << '\n';
    if (args.verify) {
        std::cout << "verify: " << phase(diffs.empty()) << '\n';
        for (const auto& d : diffs) std::cout << "  " << d << '\n';
    }
    return diffs.empty() ? kOk : kFail;
}

struct SimulateArgs {
    std::size_t ops = 100;
    std::string adversary = "random";
    std::optional<std::uint64_t> seed;
    std::string trace;
    std::string stats;
    Pid tracked = 0;
    std::size_t max_steps = 1'000'000;
};

std::unique_ptr<Adversary> make_adversary(const std::string& name, std::uint64_t seed, Pid tracked) {
    if (name == "round-robin") return std::make_unique<RoundRobinAdversary>();
    if (name == "random") return std::make_unique<RandomAdversary>(seed);
    if (name == "optimal") return std::make_unique<OptimalAdversary>(optimal_adversary(solve(tracked)));
    if (name.rfind("script:", 0) == 0) {
        std::istringstream in(read_file(name.substr(7)));
        std::vector<Pid> script;
        for (std::string tok; in >> tok;) {
            if (tok != "0" && tok != "1") throw InputError("script entries must be 0 or 1, got " + tok);
            script.push_back(static_cast<Pid>(tok[0] - '0'));
        }
        return std::make_unique<ScriptAdversary>(std::move(script));
    }
    throw InputError("unknown adversary " + name);
}

int cmd_simulate(const SimulateArgs& args) {
    const std::uint64_t seed = args.seed.value_or(default_seed());
    auto adversary = make_adversary(args.adversary, seed, args.tracked);
    Workload w;
    w.procs[0].tas_ops = args.ops;
    w.procs[1].tas_ops = args.ops;
    // The worst case assumes the other process never runs out of work.
    if (args.adversary == "optimal") w.procs[1 - args.tracked].tas_ops.reset();

    RunResult r;
    try {
        r = run(w, *adversary, seed, args.max_steps);
    } catch (const AdversaryError& e) {
        throw InputError(e.what());
    }

    std::ostream& report = args.trace.empty() ? std::cerr : std::cout;
    if (args.trace.empty()) {
        write_jsonl(std::cout, r.trace);
    } else {
        std::ofstream out(args.trace);
        if (!out) throw InputError("cannot write " + args.trace);
        write_jsonl(out, r.trace);
    }
    if (!args.stats.empty()) {
        std::ofstream out(args.stats);
        if (!out) throw InputError("cannot write " + args.stats);
        write_stats_csv(out, r.ops);
    }
    const RunStats& s = r.stats;
    report << "seed " << seed << '\n'
           << "adversary " << adversary->name() << '\n'
           << "steps " << r.trace.size() << (r.truncated ? " (truncated)" : "") << '\n'
           << "tas " << s.tas_ops << " ops, mean " << std::fixed << std::setprecision(4) << s.tas_mean
           << " accesses, max " << s.tas_max << ", returned 0: " << s.returns[0] << ", returned 1: "
           << s.returns[1] << '\n'
           << "reset " << s.reset_ops << " ops, mean " << s.reset_mean << " accesses, max " << s.reset_max
           << '\n'
           << "choose visits " << s.choose_visits << ", loop continuation frequency " << s.loop_frequency
           << '\n';
    report.unsetf(std::ios::fixed);
    return kOk;
}

int cmd_lint(const std::string& path) {
    Trace trace;
    try {
        if (path.empty() || path == "-") {
            trace = read_jsonl(std::cin);
        } else {
            std::ifstream in(path);
            if (!in) throw InputError("cannot open " + path);
            trace = read_jsonl(in);
        }
        const TwoProcessVerdict v = check_two_process(trace);
        if (v.linearizable) {
            std::cout << "linearizable: " << trace.size() << " accesses, " << v.lin->ops.size()
                      << " operations\n";
            return kOk;
        }
        std::cout << "violation: shortest rejected prefix of h|B has " << v.violation->events
                  << " events (first " << v.violation->accesses << " accesses, step " << v.violation->step
                  << ")\n";
        return kViolation;
    } catch (const TraceError& e) {
        std::cout << "corrupt trace: " << e.what() << '\n';
        return kInputError;
    }
}

struct TournamentArgs {
    std::size_t n = 3;
    std::size_t budget = 2'000'000;
    std::size_t preemptions = 3;
    std::size_t ops = 1;
    std::string order = "root-to-leaf";
    std::optional<std::uint64_t> seed;
    std::string trace;
};

int cmd_tournament(const TournamentArgs& args) {
    if (args.n < 2) throw InputError("--n must be at least 2");
    SearchOptions opt;
    opt.budget = args.budget;
    opt.max_preemptions = args.preemptions;
    opt.ops_per_process = args.ops;
    opt.seed = args.seed.value_or(default_seed());
    if (args.order == "root-to-leaf")
        opt.order = ResetOrder::RootToLeaf;
    else if (args.order == "leaf-to-root")
        opt.order = ResetOrder::LeafToRoot;
    else
        throw InputError("unknown reset order " + args.order);

    const ViolationSearch r = find_violation(args.n, opt);
    std::cout << "seed " << opt.seed << '\n' << "explored " << r.explored << " steps\n";
    if (!r.found) {
        std::cout << (r.exhausted ? "no violation: every schedule within the preemption bound is linearizable\n"
                                  : "no violation found within budget\n");
        return kFail;
    }
    std::cout << "violation found (" << r.strategy << " search)\n" << format_history(r.history);
    std::cout << "n-process history: not linearizable\n";
    for (const auto& [node, ok] : r.node_verdicts)
        std::cout << "node " << node << ": " << (ok ? "linearizable" : "NOT linearizable") << '\n';
    if (!args.trace.empty()) {
        std::ofstream out(args.trace);
        if (!out) throw InputError("cannot write " + args.trace);
        write_tournament_jsonl(out, r.trace);
    }
    return kOk;
}

int cmd_dump_fa3() {
    const Fa3& fa = fa3();
    const GoldenTable table = parse_golden_table(embedded_golden_table());
    const LabelMap labels =
        assign_labels(label_observations(table, representative_sets()), parse_label_spec(embedded_label_spec()));
    ordered_json j;
    j["states"] = ordered_json::array();
    for (std::size_t i = 0; i < fa.size(); ++i) {
        const Fa3State& s = fa.state(i);
        ordered_json st;
        st["index"] = i;
        st["label"] = std::string(1, labels.letter_of.at(i));
        st["owner"] = to_string(s.owner);
        st["p0"] = to_string(s.p[0]);
        st["p1"] = to_string(s.p[1]);
        st["epsilon_only"] = fa.epsilon_only(i);
        st["moves"] = ordered_json::array();
        for (const Fa3Move& mv : fa.moves(i))
            st["moves"].push_back({{"event", to_string(mv.event.kind)}, {"pid", mv.event.pid},
                                   {"epsilon", is_epsilon(mv.event.kind)}, {"target", mv.target}});
        j["states"].push_back(st);
    }
    j["ambiguous_letters"] = labels.ambiguous;
    std::cout << j.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-process randomized wait-free test-and-set: verification and simulation"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "Model-check the protocol against the golden table");
    c->add_flag("--json", check.json, "Machine-readable report with every computed set");
    c->add_option("--table", check.table, "Golden table file (default: built in)");
    c->add_option("--labels", check.labels, "Letter anchor file (default: built in)");
    c->add_option("--variant", check.variant, "standard | choose-rst-to-me");

    ExpectArgs expect;
    auto* e = app.add_subcommand("expect", "Worst-case expected access counts");
    e->add_flag("--verify", expect.verify, "Compare with the golden table");
    e->add_flag("--policy", expect.policy, "Print the optimal adversary as JSON");
    e->add_flag("--json", expect.json, "Machine-readable output");
    e->add_option("--tracked", expect.tracked, "Tracked process")->check(CLI::Range(0, 1));
    e->add_option("--table", expect.table, "Golden table file (default: built in)");

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Run the protocol under an adversary");
    s->add_option("--ops", sim.ops, "tas operations per process");
    s->add_option("--adversary", sim.adversary, "round-robin | random | optimal | script:FILE");
    s->add_option("--seed", sim.seed, "Seed for coins and the random adversary");
    s->add_option("--trace", sim.trace, "JSONL trace output (default: stdout)");
    s->add_option("--stats", sim.stats, "Per-operation CSV output");
    s->add_option("--tracked", sim.tracked, "Process the optimal adversary works against")->check(CLI::Range(0, 1));
    s->add_option("--max-steps", sim.max_steps, "Step limit")->check(CLI::PositiveNumber);

    std::string lint_path;
    auto* l = app.add_subcommand("lint-trace", "Check a JSONL trace for linearizability");
    l->add_option("file", lint_path, "Trace file (default: stdin)");

    TournamentArgs tour;
    auto* t = app.add_subcommand("tournament", "Search the naive tournament tree for a non-linearizable history");
    t->add_option("--n", tour.n, "Number of processes");
    t->add_option("--budget", tour.budget, "Search budget in scheduled steps");
    t->add_option("--preemptions", tour.preemptions, "Preemption bound of the exhaustive search");
    t->add_option("--ops", tour.ops, "tas operations per process");
    t->add_option("--reset-order", tour.order, "root-to-leaf | leaf-to-root");
    t->add_option("--seed", tour.seed, "Seed for coins of the guided search");
    t->add_option("--trace", tour.trace, "Write the violating trace as JSONL");

    auto* d = app.add_subcommand("dump-fa3", "Print the composed specification automaton as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kInputError;
    }

    try {
        if (*c) return cmd_check(check);
        if (*e) return cmd_expect(expect);
        if (*s) return cmd_simulate(sim);
        if (*l) return cmd_lint(lint_path);
        if (*t) return cmd_tournament(tour);
        if (*d) return cmd_dump_fa3();
    } catch (const InputError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
