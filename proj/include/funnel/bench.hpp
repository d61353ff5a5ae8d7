#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "funnel/dag.hpp"
#include "funnel/exact.hpp"
#include "funnel/generator.hpp"

namespace funnel {

inline constexpr const char* tool_version = "1.0.0";
inline constexpr const char* report_schema = "funnel-report/1";
inline constexpr const char* bench_schema = "funnel-bench/1";

enum class distance_mode { exact, approx, lower, all };

distance_mode parse_mode(const std::string& text);

struct analysis_options {
    distance_mode mode = distance_mode::all;
    std::optional<std::chrono::milliseconds> time_limit;
    // Leave wall-clock fields out so equal inputs give byte-identical output.
    bool timings = true;
};

struct report {
    std::string instance;
    std::size_t n = 0;
    std::size_t m = 0;
    bool is_funnel = false;
    std::optional<std::size_t> lower_bound;
    std::optional<std::size_t> approx_size;
    // Set only when the exact search finished.
    std::optional<std::size_t> exact_size;
    // Best solution found by the exact search, finished or not.
    std::optional<std::size_t> upper_bound;
    bool exact_timed_out = false;
    std::uint64_t nodes = 0;
    std::optional<double> lower_ms, approx_ms, exact_ms;
    std::optional<gen_params> params;
    std::optional<std::size_t> replicate;
    std::optional<arc_set> exact_deletions;
    std::optional<arc_set> approx_deletions;

    // approx / exact, 1 when both are zero.
    std::optional<double> approx_ratio() const;
    // lower <= exact <= approx <= 2 * exact over the fields that are present.
    bool bounds_chain_holds() const;
};

report analyze(const dag& g, const std::string& instance, const analysis_options& options);

nlohmann::ordered_json to_json(const report& r, bool timings = true);

// Column order of the bench CSV; fixed for a schema version.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const report& r, bool timings = true);

struct grid_spec {
    std::vector<std::size_t> n{50, 100, 200};
    std::vector<double> p{0.15, 0.5, 0.85};
    std::vector<std::size_t> s{5, 15, 25};
    std::size_t replicates = 10;
    std::chrono::milliseconds time_limit{10000};
    std::uint64_t seed = 1;

    static grid_spec desk();
    static grid_spec large();
    static grid_spec from_json(const nlohmann::json& spec);
};

// Planted funnel plus s noise arcs; the noise uses mix_seed(params.seed, 1).
dag generate_noisy_funnel(const gen_params& params);

// Instances in grid order (n, then p, then s, then replicate).
struct bench_instance {
    std::string id;
    gen_params params;
    std::size_t replicate = 0;
};

std::vector<bench_instance> expand_grid(const grid_spec& grid);

// Runs every instance with mode=all. Rows come back in grid order whatever
// the worker count. workers = 0 picks FUNNEL_WORKERS or the core count.
std::vector<report> run_bench(const grid_spec& grid, std::size_t workers = 0, bool timings = true);

nlohmann::ordered_json bench_summary(const std::vector<report>& rows, const grid_spec& grid, bool timings = true);

}  // namespace funnel
