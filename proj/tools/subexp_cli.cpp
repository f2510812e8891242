#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "subexp/subexp.hpp"

using namespace subexp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitError = 2;
constexpr int kExitMismatch = 1;

struct Common {
    std::string input = "-";
    std::optional<int> k;
    std::optional<int> root;
    std::optional<std::uint64_t> budget;
    std::string format = "json";
    bool deterministic = true;
    int threads = 1;
    int b = 2;
    std::string problem;
    std::string export_td;
};

std::string read_text(const std::string& path)
{
    if (path == "-")
        return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), {}};
}

ParsedInstance load(const Common& c)
{
    return parse_instance(read_text(c.input));
}

int require_k(const Common& c)
{
    if (!c.k)
        throw PreconditionError("--k is required");
    return *c.k;
}

std::optional<Vertex> pick_root(const Common& c, const ParsedInstance& inst)
{
    if (c.root)
        return *c.root;
    return inst.root;
}

json arcs_json(const std::vector<Arc>& arcs)
{
    json out = json::array();
    for (const Arc& a : arcs)
        out.push_back({a.tail, a.head});
    return out;
}

json optional_json(const std::optional<int>& v)
{
    return v ? json(*v) : json(nullptr);
}

void emit(const Common& c, const json& obj)
{
    if (c.format == "json") {
        std::cout << obj.dump() << '\n';
        return;
    }
    std::vector<std::string> header, row;
    for (const auto& [key, value] : obj.items()) {
        if (value.is_array() || value.is_object())
            continue;
        header.push_back(key);
        row.push_back(value.is_string() ? value.get<std::string>()
                      : value.is_null() ? std::string()
                                        : value.dump());
    }
    write_csv_line(std::cout, header);
    write_csv_line(std::cout, row);
}

json report_json(const StructureReport& r)
{
    return {{"root", r.root},
            {"k", r.k},
            {"k_effective", r.k_effective},
            {"alpha", r.alpha},
            {"beta", r.beta},
            {"s_geq2", r.s_geq2_size},
            {"s_eq1", r.s_eq1_size},
            {"contractions", r.contractions_applied},
            {"reduced_vertices", r.reduced_vertices},
            {"s_size", r.extracted_s.size()},
            {"guarantee", to_string(r.guarantee)}};
}

json lob_json(const LobResult& res)
{
    json trace = json::array();
    for (const auto& r : res.trace)
        trace.push_back(report_json(r));
    return {{"problem", "lob"},
            {"answer", res.answer},
            {"root", optional_json(res.root)},
            {"leaves", optional_json(res.witness_leaves)},
            {"certificate_only", res.certificate_only},
            {"max_width", res.max_decomposition_width},
            {"witness", res.witness ? arcs_json(res.witness->arcs()) : json(nullptr)},
            {"trace", trace}};
}

IobOptions iob_options(const Common& c, std::optional<Vertex> root)
{
    IobOptions opt;
    opt.root = root;
    if (c.budget)
        opt.budget = *c.budget;
    opt.threads = c.threads;
    opt.deterministic = c.deterministic;
    return opt;
}

json iob_json(const IobResult& res)
{
    json witness = nullptr;
    if (res.witness) {
        std::vector<Arc> arcs;
        for (const Arc& a : res.witness->arcs())
            arcs.push_back({res.kernel_vertices[a.tail], res.kernel_vertices[a.head]});
        witness = arcs_json(arcs);
    }
    return {{"problem", "iob"},
            {"answer", res.answer},
            {"root", optional_json(res.root)},
            {"internal", optional_json(res.witness_internal)},
            {"part", optional_json(res.found_part)},
            {"roots_tried", res.stats.roots_tried},
            {"collection_size", res.stats.collection_size},
            {"instances", res.stats.instances_examined},
            {"max_width", res.stats.max_width},
            {"kernel_vertices", res.stats.kernel_vertices},
            {"z", res.found_z},
            {"witness", witness}};
}

KpathOptions kpath_options(const Common& c)
{
    KpathOptions opt;
    if (c.budget)
        opt.budget = *c.budget;
    return opt;
}

json kpath_json(const KpathResult& res)
{
    return {{"problem", "kpath"},
            {"answer", res.answer},
            {"radius", res.stats.radius},
            {"ball_sets", res.stats.ball_sets},
            {"sets_examined", res.stats.sets_examined},
            {"max_width", res.stats.max_width},
            {"max_cover", res.stats.max_cover_size},
            {"centres", res.centres},
            {"path", res.path}};
}

int run_solve_lob(const Common& c)
{
    const int k = require_k(c);
    const ParsedInstance inst = load(c);
    LobOptions opt;
    opt.root = pick_root(c, inst);
    emit(c, lob_json(solve_lob(inst.digraph, k, opt)));
    return 0;
}

int run_solve_iob(const Common& c)
{
    const int k = require_k(c);
    const ParsedInstance inst = load(c);
    emit(c, iob_json(solve_iob(inst.digraph, k, iob_options(c, pick_root(c, inst)))));
    return 0;
}

int run_solve_kpath(const Common& c)
{
    const int k = require_k(c);
    const ParsedInstance inst = load(c);
    emit(c, kpath_json(solve_kpath_ballcover(inst.digraph, k, c.b, kpath_options(c))));
    return 0;
}

int run_verify(const Common& c)
{
    const int k = require_k(c);
    const ParsedInstance inst = load(c);
    const Digraph& d = inst.digraph;
    const std::optional<Vertex> root = pick_root(c, inst);
    bool solver = false;
    std::optional<int> best;
    std::optional<std::string> witness_problem;

    if (c.problem == "lob") {
        LobOptions opt;
        opt.root = root;
        const LobResult res = solve_lob(d, k, opt);
        solver = res.answer;
        best = root ? brute_max_leaves(d, *root) : brute_max_leaves_any_root(d);
        if (res.witness) {
            witness_problem = res.witness->check(d);
            if (!witness_problem && res.witness->leaf_count() < k)
                witness_problem = "witness has fewer than k leaves";
        }
    } else if (c.problem == "iob") {
        const IobResult res = solve_iob(d, k, iob_options(c, root));
        solver = res.answer;
        best = root ? brute_max_internal(d, *root) : brute_max_internal_any_root(d);
        if (res.witness && res.witness->internal_count() < k)
            witness_problem = "witness has fewer than k internal vertices";
    } else if (c.problem == "kpath") {
        const KpathResult res = solve_kpath_ballcover(d, k, c.b, kpath_options(c));
        solver = res.answer;
        best = brute_longest_path(d);
        for (std::size_t i = 0; i + 1 < res.path.size(); ++i)
            if (!d.has_arc(res.path[i], res.path[i + 1]))
                witness_problem = "path uses a missing arc";
    } else {
        throw PreconditionError("--problem must be lob, iob or kpath");
    }
    const bool oracle = best && *best >= k;
    const bool agree = solver == oracle && !witness_problem;
    emit(c, {{"problem", c.problem},
             {"k", k},
             {"solver", solver},
             {"oracle", oracle},
             {"oracle_value", optional_json(best)},
             {"witness_error", witness_problem ? json(*witness_problem) : json(nullptr)},
             {"agree", agree}});
    return agree ? 0 : kExitMismatch;
}

int run_analyze(const Common& c)
{
    const int k = require_k(c);
    const ParsedInstance inst = load(c);
    const Vertex root = pick_root(c, inst).value_or(0);
    const AnalysisReport rep = analyze(inst.digraph, root, k);
    if (!c.export_td.empty()) {
        const ReductionOutcome out = reduce_lob(inst.digraph, root, rep.k);
        std::ofstream td(c.export_td);
        if (!td)
            throw PreconditionError("cannot write '" + c.export_td + "'");
        write_decomposition(td, greedy_decomposition(underlying_graph(out.reduced)));
    }
    if (c.format == "csv") {
        write_csv_line(std::cout, analysis_csv_header());
        write_csv_line(std::cout, analysis_csv_row(rep));
        return 0;
    }
    json obj;
    obj["root"] = rep.root;
    obj["k"] = rep.k;
    obj["n"] = rep.n;
    obj["m"] = rep.m;
    obj["outcome"] = rep.outcome;
    obj["guarantee"] = rep.guarantee;
    obj["reduced_vertices"] = rep.reduced_vertices;
    obj["alpha"] = rep.alpha;
    obj["beta"] = rep.beta;
    obj["s_geq2"] = rep.s_geq2;
    obj["s_eq1"] = rep.s_eq1;
    obj["s_size"] = rep.s_size;
    obj["tw_greedy_before"] = rep.tw_greedy_before;
    obj["tw_exact_before"] = optional_json(rep.tw_exact_before);
    obj["tw_greedy_after"] = rep.tw_greedy_after;
    obj["tw_exact_after"] = optional_json(rep.tw_exact_after);
    obj["tw_per_sqrt_s"] = rep.tw_per_sqrt_s ? json(*rep.tw_per_sqrt_s) : json(nullptr);
    obj["s"] = rep.s;
    std::cout << obj.dump() << '\n';
    return 0;
}

struct GenerateArgs {
    std::string family = "grid";
    int rows = 0;
    int cols = 0;
    int n = 0;
    int m = 0;
    std::uint64_t seed = 0;
    double p2 = 0.0;
    std::optional<int> root;
    std::string output = "-";
};

int run_generate(const GenerateArgs& g)
{
    GeneratorSpec spec;
    spec.family = parse_family(g.family);
    spec.rows = g.rows;
    spec.cols = g.cols;
    spec.n = g.n;
    spec.m = g.m;
    spec.seed = g.seed;
    spec.p2 = g.p2;
    const Digraph d = generate(spec);
    std::optional<Vertex> root;
    if (g.root) {
        if (!d.contains(*g.root))
            throw PreconditionError("--root out of range");
        root = *g.root;
    }
    const std::string text = serialize_digraph(d, root);
    if (g.output == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(g.output);
    if (!out)
        throw PreconditionError("cannot write '" + g.output + "'");
    out << text;
    return 0;
}

BenchSuite parse_suite(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("suite: ") + e.what());
    }
    BenchSuite suite;
    try {
        if (j.contains("problems"))
            suite.problems = j.at("problems").get<std::vector<std::string>>();
        suite.b = j.value("b", suite.b);
        suite.budget = j.value("budget", suite.budget);
        for (const auto& item : j.value("cases", json::array())) {
            BenchCase c;
            c.spec.family = parse_family(item.value("family", std::string("grid")));
            c.spec.rows = item.value("rows", 0);
            c.spec.cols = item.value("cols", 0);
            c.spec.n = item.value("n", 0);
            c.spec.m = item.value("m", 0);
            c.spec.seed = item.value("seed", std::uint64_t{0});
            c.spec.p2 = item.value("p2", 0.0);
            c.k = item.at("k").get<int>();
            if (item.contains("root"))
                c.root = item.at("root").get<int>();
            c.name = item.value("name", "case" + std::to_string(suite.cases.size()));
            suite.cases.push_back(c);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("suite: ") + e.what());
    }
    for (const auto& p : suite.problems)
        if (p != "lob" && p != "iob" && p != "kpath")
            throw ParseError("suite: unknown problem '" + p + "'");
    return suite;
}

int run_bench(const Common& c)
{
    BenchSuite suite = parse_suite(read_text(c.input));
    if (c.budget)
        suite.budget = *c.budget;
    subexp::run_bench(suite, std::cout);
    return 0;
}

void add_input(CLI::App* cmd, Common& c)
{
    cmd->add_option("--input,-i", c.input, "Instance file, '-' for stdin");
}

void add_solver_flags(CLI::App* cmd, Common& c)
{
    add_input(cmd, c);
    cmd->add_option("--k", c.k, "Parameter k");
    cmd->add_option("--root", c.root, "Fix the root");
    cmd->add_option("--budget", c.budget, "Enumeration budget");
    cmd->add_option("--format,--report", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
}

void print_error(const std::string& kind, const std::string& message)
{
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parameterized out-branching and directed path solvers"};
    app.require_subcommand(1);
    Common c;
    GenerateArgs g;

    auto* lob = app.add_subcommand("solve-lob", "k-Leaf Out-Branching");
    add_solver_flags(lob, c);

    auto* iob = app.add_subcommand("solve-iob", "k-Internal Out-Branching");
    add_solver_flags(iob, c);
    iob->add_flag("--deterministic,!--any-order", c.deterministic,
                  "Report the first yes in enumeration order (default)");
    iob->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);

    auto* kpath = app.add_subcommand("solve-kpath", "k-Directed Path by ball covers");
    add_solver_flags(kpath, c);
    kpath->add_option("--b", c.b, "Number of balls")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Compare a solver with the brute-force oracle");
    add_solver_flags(verify, c);
    verify->add_option("--problem", c.problem, "lob, iob or kpath")
        ->required()
        ->check(CLI::IsMember({"lob", "iob", "kpath"}));
    verify->add_option("--b", c.b, "Number of balls for kpath")->check(CLI::PositiveNumber);
    verify->add_flag("--deterministic,!--any-order", c.deterministic);
    verify->add_option("--threads", c.threads)->check(CLI::PositiveNumber);

    auto* an = app.add_subcommand("analyze", "Structural report of the leaf reduction");
    add_solver_flags(an, c);
    an->add_option("--export-td", c.export_td, "Write a tree decomposition of UG(D')");

    auto* gen = app.add_subcommand("generate", "Seeded instance generator");
    gen->add_option("--family", g.family)->check(CLI::IsMember({"grid", "random-sparse"}));
    gen->add_option("--rows", g.rows);
    gen->add_option("--cols", g.cols);
    gen->add_option("--n", g.n);
    gen->add_option("--m", g.m);
    gen->add_option("--seed", g.seed);
    gen->add_option("--p2", g.p2, "Probability an edge becomes a 2-cycle");
    gen->add_option("--root", g.root, "Append a root line");
    gen->add_option("--output,-o", g.output);

    auto* bench = app.add_subcommand("bench", "Run a JSON suite, write CSV");
    add_input(bench, c);
    bench->add_option("--budget", c.budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return kExitError;
    }

    try {
        if (lob->parsed())
            return run_solve_lob(c);
        if (iob->parsed())
            return run_solve_iob(c);
        if (kpath->parsed())
            return run_solve_kpath(c);
        if (verify->parsed())
            return run_verify(c);
        if (an->parsed())
            return run_analyze(c);
        if (gen->parsed())
            return run_generate(g);
        if (bench->parsed())
            return run_bench(c);
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
        return kExitError;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return kExitError;
    }
    return 0;
}
