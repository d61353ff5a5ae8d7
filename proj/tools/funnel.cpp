// funnel: recognize funnels, compute arc-deletion distances, generate
// instances and run the benchmark grid.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "funnel/approx.hpp"
#include "funnel/bench.hpp"
#include "funnel/io.hpp"
#include "funnel/recognition.hpp"

namespace {

using namespace funnel;

constexpr int exit_funnel = 0;
constexpr int exit_not_funnel = 1;
constexpr int exit_error = 2;

std::string read_input(const std::string& path)
{
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw std::runtime_error("cannot write " + path);
}

struct loaded_graph {
    dag graph;
    std::vector<vertex_id> component_of;  // empty without --condense
};

loaded_graph load(const std::string& path, bool condense, bool names)
{
    const std::string text = read_input(path);
    if (!condense && !names)
        return {parse_edge_list(text), {}};
    const raw_digraph raw = parse_raw_digraph(text, names);
    if (!condense) {
        return {dag::from_arcs(raw.vertex_count, raw.arcs), {}};
    }
    condensation c = condense_scc(raw.vertex_count, raw.arcs);
    return {std::move(c.graph), std::move(c.component_of)};
}

void print_condensation(const loaded_graph& g)
{
    if (g.component_of.empty())
        return;
    std::cout << "# condensed " << g.component_of.size() << " vertices into " << g.graph.vertex_count()
              << " components\n";
}

struct check_args {
    std::string input;
    bool condense = false;
    bool names = false;
    std::string dot;
};

int run_check(const check_args& args)
{
    const loaded_graph loaded = load(args.input, args.condense, args.names);
    const dag& g = loaded.graph;
    print_condensation(loaded);
    if (auto witness = find_forbidden_witness(g)) {
        std::cout << "not a funnel\n";
        std::cout << "witness D_" << witness->path.size() - 1 << '\n';
        arc_set arcs;
        for (const arc& a : witness->arcs()) {
            std::cout << a.tail << ' ' << a.head << '\n';
            arcs.insert(a);
        }
        if (!args.dot.empty())
            write_file(args.dot, emit_dot(g, arcs));
        return exit_not_funnel;
    }
    const labeling labels = funnel_labeling(g);
    std::cout << "funnel\n" << emit_labeling(labels);
    if (!args.dot.empty())
        write_file(args.dot, emit_dot(g, {}, labels));
    return exit_funnel;
}

struct distance_args {
    std::string input;
    std::string mode = "all";
    long long time_limit_ms = 0;
    bool condense = false;
    bool names = false;
    bool no_timings = false;
};

int run_distance(const distance_args& args)
{
    const loaded_graph loaded = load(args.input, args.condense, args.names);
    analysis_options options;
    options.mode = parse_mode(args.mode);
    if (args.time_limit_ms > 0)
        options.time_limit = std::chrono::milliseconds(args.time_limit_ms);
    options.timings = !args.no_timings;
    const report r = analyze(loaded.graph, args.input, options);
    std::cout << to_json(r, options.timings).dump(2) << '\n';
    return 0;
}

struct generate_args {
    std::size_t n = 0;
    double p = 0.5;
    std::size_t s = 0;
    std::uint64_t seed = 1;
    std::string cnf;
    std::string out;
};

nlohmann::ordered_json arc_list(const std::vector<arc>& arcs)
{
    auto list = nlohmann::ordered_json::array();
    for (const arc& a : arcs)
        list.push_back({a.tail, a.head});
    return list;
}

int run_generate(const generate_args& args)
{
    nlohmann::ordered_json provenance;
    provenance["tool"] = "funnel";
    provenance["version"] = tool_version;
    if (!args.cnf.empty()) {
        const cnf_formula formula = parse_dimacs(read_input(args.cnf));
        const reduction red = reduce_3sat(formula);
        write_file(args.out + ".edges", emit_edge_list(red.graph));
        provenance["kind"] = "3sat-reduction";
        provenance["formula"] = {{"variables", formula.variable_count}, {"clauses", formula.clauses}};
        provenance["n"] = red.graph.vertex_count();
        provenance["m"] = red.graph.arc_count();
        provenance["target"] = red.target;
    } else {
        const gen_params params{args.n, args.p, args.s, args.seed};
        const planted_instance planted = generate_planted_funnel(params);
        const dag noisy = add_noise_arcs(planted.graph, args.s, mix_seed(args.seed, 1));
        std::vector<arc> noise;
        for (const arc& a : noisy.arcs())
            if (!planted.graph.has_arc(a.tail, a.head))
                noise.push_back(a);
        write_file(args.out + ".edges", emit_edge_list(noisy));
        write_file(args.out + ".labels", emit_labeling(planted.labels));
        provenance["kind"] = "planted-funnel";
        provenance["params"] = {{"n", args.n}, {"p", args.p}, {"s", args.s}, {"seed", args.seed}};
        provenance["noise_seed"] = mix_seed(args.seed, 1);
        provenance["n"] = noisy.vertex_count();
        provenance["m"] = noisy.arc_count();
        provenance["noise_arcs"] = arc_list(noise);
    }
    write_file(args.out + ".json", provenance.dump(2) + "\n");
    return 0;
}

struct bench_args {
    std::string grid;
    bool large_grid = false;
    std::string out;
    std::string summary;
    std::size_t workers = 0;
    bool no_timings = false;
};

int run_bench_command(const bench_args& args)
{
    grid_spec grid = args.large_grid ? grid_spec::large() : grid_spec::desk();
    if (!args.grid.empty()) {
        nlohmann::json spec;
        try {
            spec = nlohmann::json::parse(read_input(args.grid));
        } catch (const nlohmann::json::parse_error& e) {
            throw error(error_code::domain_error, std::string("grid spec: ") + e.what());
        }
        grid = grid_spec::from_json(spec);
    }
    const bool timings = !args.no_timings;
    const auto rows = run_bench(grid, args.workers, timings);
    std::ostringstream csv;
    csv << csv_header() << '\n';
    for (const report& r : rows)
        csv << csv_row(r, timings) << '\n';
    if (args.out.empty() || args.out == "-")
        std::cout << csv.str();
    else
        write_file(args.out, csv.str());
    const std::string summary = bench_summary(rows, grid, timings).dump(2) + "\n";
    if (!args.summary.empty())
        write_file(args.summary, summary);
    else if (!args.out.empty() && args.out != "-")
        std::cout << summary;
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Funnel recognition and arc-deletion distance"};
    app.set_version_flag("--version", std::string(funnel::tool_version));
    app.require_subcommand(1);

    check_args check;
    auto* check_cmd = app.add_subcommand("check", "Decide whether a DAG is a funnel (exit 0 yes, 1 no, 2 error)");
    check_cmd->add_option("input", check.input, "Edge-list file, '-' for stdin")->required();
    check_cmd->add_flag("--condense", check.condense, "Contract strongly connected components first");
    check_cmd->add_flag("--names", check.names, "Vertex tokens are arbitrary names");
    check_cmd->add_option("--dot", check.dot, "Write a DOT drawing (witness dashed, or labels)");

    distance_args distance;
    auto* distance_cmd = app.add_subcommand("distance", "Arc-deletion distance to a funnel, as JSON");
    distance_cmd->add_option("input", distance.input, "Edge-list file, '-' for stdin")->required();
    distance_cmd->add_option("--mode", distance.mode, "exact, approx, lower or all")
        ->check(CLI::IsMember({"exact", "approx", "lower", "all"}))
        ->capture_default_str();
    distance_cmd->add_option("--time-limit-ms", distance.time_limit_ms, "Soft limit for the exact search (0 = none)")
        ->check(CLI::NonNegativeNumber);
    distance_cmd->add_flag("--condense", distance.condense, "Contract strongly connected components first");
    distance_cmd->add_flag("--names", distance.names, "Vertex tokens are arbitrary names");
    distance_cmd->add_flag("--no-timings", distance.no_timings, "Omit wall-clock fields");

    generate_args generate;
    auto* generate_cmd = app.add_subcommand("generate", "Planted funnel plus noise, or a 3-SAT gadget graph");
    generate_cmd->add_option("-n,--n", generate.n, "Vertex count");
    generate_cmd->add_option("-p,--p", generate.p, "Fork->Merge density")->check(CLI::Range(0.0, 1.0));
    generate_cmd->add_option("-s,--s", generate.s, "Noise arcs");
    generate_cmd->add_option("--seed", generate.seed, "Random seed");
    auto* cnf_opt = generate_cmd->add_option("--cnf", generate.cnf, "DIMACS 3-CNF file to reduce");
    generate_cmd->add_option("--out", generate.out, "Output prefix for .edges/.labels/.json")->required();
    generate_cmd->get_option("-n")->excludes(cnf_opt);

    bench_args bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the experiment grid; CSV rows plus a JSON summary");
    auto* grid_opt = bench_cmd->add_option("--grid", bench.grid, "Grid spec JSON file");
    bench_cmd->add_flag("--large-grid", bench.large_grid, "Full-scale grid instead of the desk grid")
        ->excludes(grid_opt);
    bench_cmd->add_option("--out", bench.out, "CSV output path ('-' or empty for stdout)");
    bench_cmd->add_option("--summary", bench.summary, "Summary JSON path");
    bench_cmd->add_option("--workers", bench.workers, "Worker threads (default FUNNEL_WORKERS or core count)");
    bench_cmd->add_flag("--no-timings", bench.no_timings, "Omit wall-clock columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_error;
    }

    try {
        if (*check_cmd)
            return run_check(check);
        if (*distance_cmd)
            return run_distance(distance);
        if (*generate_cmd) {
            if (generate.cnf.empty() && generate.n == 0)
                throw funnel::error(funnel::error_code::domain_error, "generate needs -n or --cnf");
            return run_generate(generate);
        }
        if (*bench_cmd)
            return run_bench_command(bench);
    } catch (const funnel::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
