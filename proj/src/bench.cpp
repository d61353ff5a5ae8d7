#include "funnel/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "funnel/approx.hpp"
#include "funnel/recognition.hpp"

namespace funnel {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point since)
{
    return std::chrono::duration<double, std::milli>(clock_type::now() - since).count();
}

std::string format_double(double value, const char* fmt)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, fmt, value);
    return buffer;
}

nlohmann::ordered_json arcs_json(const arc_set& arcs)
{
    auto list = nlohmann::ordered_json::array();
    for (const arc& a : arcs)
        list.push_back({a.tail, a.head});
    return list;
}

}  // namespace

distance_mode parse_mode(const std::string& text)
{
    if (text == "exact")
        return distance_mode::exact;
    if (text == "approx")
        return distance_mode::approx;
    if (text == "lower")
        return distance_mode::lower;
    if (text == "all")
        return distance_mode::all;
    throw error(error_code::domain_error, "mode must be exact, approx, lower or all");
}

std::optional<double> report::approx_ratio() const
{
    if (!approx_size || !exact_size)
        return std::nullopt;
    if (*exact_size == 0)
        return *approx_size == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(*approx_size) / static_cast<double>(*exact_size);
}

bool report::bounds_chain_holds() const
{
    if (lower_bound && exact_size && *lower_bound > *exact_size)
        return false;
    if (exact_size && approx_size && (*exact_size > *approx_size || *approx_size > 2 * *exact_size))
        return false;
    if (lower_bound && approx_size && *lower_bound > *approx_size)
        return false;
    if (lower_bound && upper_bound && *lower_bound > *upper_bound)
        return false;
    return true;
}

report analyze(const dag& g, const std::string& instance, const analysis_options& options)
{
    report r;
    r.instance = instance;
    r.n = g.vertex_count();
    r.m = g.arc_count();
    r.is_funnel = is_funnel_degree(g);
    const bool all = options.mode == distance_mode::all;

    if (all || options.mode == distance_mode::lower) {
        const auto start = clock_type::now();
        r.lower_bound = lower_bound(g);
        r.lower_ms = elapsed_ms(start);
    }
    if (all || options.mode == distance_mode::approx) {
        const auto start = clock_type::now();
        approx_result approx = approximate_addf(g);
        r.approx_ms = elapsed_ms(start);
        r.approx_size = approx.size;
        r.approx_deletions = std::move(approx.deletion_set);
    }
    if (all || options.mode == distance_mode::exact) {
        solver_options solver;
        solver.time_limit = options.time_limit;
        const auto start = clock_type::now();
        exact_result exact = solve_addf(g, solver);
        r.exact_ms = elapsed_ms(start);
        r.upper_bound = exact.distance;
        r.nodes = exact.stats.nodes;
        r.exact_timed_out = !exact.optimal;
        if (exact.optimal) {
            r.exact_size = exact.distance;
            r.exact_deletions = std::move(exact.deletion_set);
        }
        if (!r.lower_bound)
            r.lower_bound = exact.root_lower_bound;
    }
    if (!options.timings)
        r.lower_ms = r.approx_ms = r.exact_ms = std::nullopt;
    return r;
}

nlohmann::ordered_json to_json(const report& r, bool timings)
{
    nlohmann::ordered_json j;
    j["schema"] = report_schema;
    j["instance"] = r.instance;
    j["n"] = r.n;
    j["m"] = r.m;
    j["is_funnel"] = r.is_funnel;
    auto optional_field = [&j](const char* key, const auto& value) {
        if (value)
            j[key] = *value;
        else
            j[key] = nullptr;
    };
    optional_field("lower_bound", r.lower_bound);
    optional_field("approx_size", r.approx_size);
    optional_field("exact_size", r.exact_size);
    optional_field("upper_bound", r.upper_bound);
    j["exact_timed_out"] = r.exact_timed_out;
    optional_field("approx_ratio", r.approx_ratio());
    j["nodes"] = r.nodes;
    if (r.params) {
        j["params"] = {{"n", r.params->n}, {"p", r.params->p}, {"s", r.params->s}, {"seed", r.params->seed}};
        if (r.replicate)
            j["params"]["replicate"] = *r.replicate;
    }
    if (r.approx_deletions)
        j["approx_deletions"] = arcs_json(*r.approx_deletions);
    if (r.exact_deletions)
        j["exact_deletions"] = arcs_json(*r.exact_deletions);
    if (timings) {
        nlohmann::ordered_json times;
        auto time_field = [&times](const char* key, const std::optional<double>& value) {
            if (value)
                times[key] = *value;
        };
        time_field("lower", r.lower_ms);
        time_field("approx", r.approx_ms);
        time_field("exact", r.exact_ms);
        j["times_ms"] = times.is_null() ? nlohmann::ordered_json::object() : times;
    }
    return j;
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> columns{
        "instance",    "n",          "m",          "p",          "s",     "seed",     "replicate",
        "is_funnel",   "lower_bound", "approx_size", "exact_size", "upper_bound", "exact_timed_out",
        "approx_ratio", "nodes",     "lower_ms",   "approx_ms",  "exact_ms"};
    return columns;
}

std::string csv_header()
{
    std::string line;
    for (const auto& c : csv_columns()) {
        if (!line.empty())
            line += ',';
        line += c;
    }
    return line;
}

std::string csv_row(const report& r, bool timings)
{
    auto opt_size = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
    auto opt_ms = [timings](const std::optional<double>& v) {
        return timings && v ? format_double(*v, "%.3f") : std::string();
    };
    std::vector<std::string> cells{
        r.instance,
        std::to_string(r.n),
        std::to_string(r.m),
        r.params ? format_double(r.params->p, "%g") : "",
        r.params ? std::to_string(r.params->s) : "",
        r.params ? std::to_string(r.params->seed) : "",
        opt_size(r.replicate),
        r.is_funnel ? "1" : "0",
        opt_size(r.lower_bound),
        opt_size(r.approx_size),
        opt_size(r.exact_size),
        opt_size(r.upper_bound),
        r.exact_timed_out ? "1" : "0",
        r.approx_ratio() ? format_double(*r.approx_ratio(), "%.6f") : "",
        std::to_string(r.nodes),
        opt_ms(r.lower_ms),
        opt_ms(r.approx_ms),
        opt_ms(r.exact_ms),
    };
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            line += ',';
        line += cells[i];
    }
    return line;
}

grid_spec grid_spec::desk()
{
    return grid_spec{};
}

grid_spec grid_spec::large()
{
    grid_spec g;
    g.n = {250, 300, 500, 1000};
    g.s = {125, 150, 175};
    g.replicates = 30;
    g.time_limit = std::chrono::minutes(10);
    return g;
}

grid_spec grid_spec::from_json(const nlohmann::json& spec)
{
    grid_spec g;
    auto fail = [](const std::string& what) { throw error(error_code::domain_error, "grid spec: " + what); };
    if (!spec.is_object())
        fail("expected a JSON object");
    for (const auto& [key, _] : spec.items())
        if (key != "n" && key != "p" && key != "s" && key != "replicates" && key != "time_limit_ms" && key != "seed")
            fail("unknown key '" + key + "'");
    try {
        if (spec.contains("n"))
            g.n = spec.at("n").get<std::vector<std::size_t>>();
        if (spec.contains("p"))
            g.p = spec.at("p").get<std::vector<double>>();
        if (spec.contains("s"))
            g.s = spec.at("s").get<std::vector<std::size_t>>();
        if (spec.contains("replicates"))
            g.replicates = spec.at("replicates").get<std::size_t>();
        if (spec.contains("time_limit_ms"))
            g.time_limit = std::chrono::milliseconds(spec.at("time_limit_ms").get<std::int64_t>());
        if (spec.contains("seed"))
            g.seed = spec.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        fail(e.what());
    }
    if (g.n.empty() || g.p.empty() || g.s.empty())
        fail("n, p and s must be non-empty");
    if (std::any_of(g.n.begin(), g.n.end(), [](std::size_t n) { return n < 1; }))
        fail("every n must be >= 1");
    if (std::any_of(g.p.begin(), g.p.end(), [](double p) { return !(p >= 0.0 && p <= 1.0); }))
        fail("every p must lie in [0, 1]");
    if (g.replicates < 1)
        fail("replicates must be >= 1");
    if (g.time_limit.count() <= 0)
        fail("time_limit_ms must be positive");
    return g;
}

dag generate_noisy_funnel(const gen_params& params)
{
    const planted_instance planted = generate_planted_funnel(params);
    return add_noise_arcs(planted.graph, params.s, mix_seed(params.seed, 1));
}

std::vector<bench_instance> expand_grid(const grid_spec& grid)
{
    std::vector<bench_instance> instances;
    for (std::size_t n : grid.n)
        for (double p : grid.p)
            for (std::size_t s : grid.s)
                for (std::size_t rep = 0; rep < grid.replicates; ++rep) {
                    bench_instance inst;
                    inst.params = {n, p, s, mix_seed(grid.seed, instances.size())};
                    inst.replicate = rep;
                    inst.id = "n" + std::to_string(n) + "-p" + format_double(p, "%g") + "-s" + std::to_string(s) +
                              "-r" + std::to_string(rep);
                    instances.push_back(std::move(inst));
                }
    return instances;
}

std::vector<report> run_bench(const grid_spec& grid, std::size_t workers, bool timings)
{
    const auto instances = expand_grid(grid);
    if (workers == 0) {
        if (const char* env = std::getenv("FUNNEL_WORKERS"))
            workers = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
        if (workers == 0)
            workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, std::max<std::size_t>(instances.size(), 1));

    std::vector<report> rows(instances.size());
    std::vector<std::exception_ptr> failures(instances.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
            try {
                const bench_instance& inst = instances[i];
                analysis_options options;
                options.time_limit = grid.time_limit;
                options.timings = timings;
                report r = analyze(generate_noisy_funnel(inst.params), inst.id, options);
                r.params = inst.params;
                r.replicate = inst.replicate;
                r.approx_deletions.reset();
                r.exact_deletions.reset();
                rows[i] = std::move(r);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    for (const auto& failure : failures)
        if (failure)
            std::rethrow_exception(failure);
    return rows;
}

nlohmann::ordered_json bench_summary(const std::vector<report>& rows, const grid_spec& grid, bool timings)
{
    nlohmann::ordered_json s;
    s["schema"] = bench_schema;
    s["csv_columns"] = csv_columns();
    s["instances"] = rows.size();
    s["time_limit_ms"] = grid.time_limit.count();

    std::size_t solved = 0, optimal = 0, chain_violations = 0, factor_violations = 0;
    std::size_t within_105 = 0, within_110 = 0, within_125 = 0;
    std::size_t excess[4] = {0, 0, 0, 0};
    double ratio_sum = 0.0, ratio_max = 0.0;
    std::vector<double> solve_times;
    for (const report& r : rows) {
        if (!r.bounds_chain_holds())
            ++chain_violations;
        if (!r.exact_size)
            continue;
        ++solved;
        if (r.exact_ms)
            solve_times.push_back(*r.exact_ms);
        const double ratio = *r.approx_ratio();
        ratio_sum += ratio;
        ratio_max = std::max(ratio_max, ratio);
        optimal += ratio == 1.0;
        within_105 += ratio <= 1.05;
        within_110 += ratio <= 1.10;
        within_125 += ratio <= 1.25;
        if (*r.approx_size > 2 * *r.exact_size)
            ++factor_violations;
        excess[std::min<std::size_t>(*r.approx_size - *r.exact_size, 3)]++;
    }
    const double total = rows.empty() ? 1.0 : static_cast<double>(rows.size());
    const double solved_d = solved == 0 ? 1.0 : static_cast<double>(solved);
    s["solved"] = solved;
    s["solved_fraction"] = static_cast<double>(solved) / total;
    if (timings) {
        nlohmann::ordered_json curve = nlohmann::ordered_json::object();
        for (double limit : {10.0, 100.0, 1000.0, 5000.0, static_cast<double>(grid.time_limit.count())}) {
            const auto count = std::count_if(solve_times.begin(), solve_times.end(),
                                             [limit](double t) { return t <= limit; });
            curve[format_double(limit, "%.0f")] = static_cast<double>(count) / total;
        }
        s["solved_within_ms"] = curve;
    }
    s["approx_ratio"] = {
        {"mean", solved ? ratio_sum / solved_d : 0.0},
        {"max", ratio_max},
        {"optimal_fraction", static_cast<double>(optimal) / solved_d},
        {"within_1.05", static_cast<double>(within_105) / solved_d},
        {"within_1.10", static_cast<double>(within_110) / solved_d},
        {"within_1.25", static_cast<double>(within_125) / solved_d},
        {"excess_histogram", {{"0", excess[0]}, {"1", excess[1]}, {"2", excess[2]}, {"3+", excess[3]}}},
    };
    s["factor_two_violations"] = factor_violations;
    s["bounds_chain_violations"] = chain_violations;
    return s;
}

}  // namespace funnel
