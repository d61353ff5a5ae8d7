#include "funnel/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_set>

namespace funnel {

std::uint64_t rng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw error(error_code::domain_error, "rng::below needs a positive bound");
    // Accept draws below the largest multiple of bound.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

double rng::unit()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index)
{
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

planted_instance generate_planted_funnel(const gen_params& params)
{
    if (params.n < 1)
        throw error(error_code::domain_error, "planted funnel needs n >= 1");
    if (!(params.p >= 0.0 && params.p <= 1.0))
        throw error(error_code::domain_error, "density p must lie in [0, 1]");
    const std::size_t n = params.n;
    rng random(params.seed);

    labeling labels(n);
    for (vertex_id v = 0; v < n; ++v)
        labels[v] = (random.next() >> 63) ? label::merge : label::fork;

    std::vector<arc> arcs;
    std::vector<vertex_id> forks, merges;
    for (vertex_id v = 0; v < n; ++v)
        (labels[v] == label::fork ? forks : merges).push_back(v);

    for (std::size_t j = 1; j < forks.size(); ++j) {
        const std::uint64_t r = random.below(j + 1);
        if (r < j)
            arcs.push_back({forks[r], forks[j]});
    }
    // Merges from the back: the j-th from last attaches to a later Merge.
    for (std::size_t j = 1; j < merges.size(); ++j) {
        const std::size_t self = merges.size() - 1 - j;
        const std::uint64_t r = random.below(j + 1);
        if (r < j)
            arcs.push_back({merges[self], merges[merges.size() - 1 - r]});
    }

    // Forward Fork->Merge pairs, indexed merge by merge.
    std::vector<std::uint64_t> first_index(merges.size() + 1, 0);
    {
        std::size_t forks_before = 0, f = 0;
        for (std::size_t i = 0; i < merges.size(); ++i) {
            while (f < forks.size() && forks[f] < merges[i]) {
                ++f;
                ++forks_before;
            }
            first_index[i + 1] = first_index[i] + forks_before;
        }
    }
    const std::uint64_t pairs = first_index.back();
    // The epsilon keeps p * pairs values like 0.15 * 100 from rounding up.
    const auto wanted = static_cast<std::uint64_t>(std::ceil(params.p * static_cast<double>(pairs) - 1e-9));
    const std::uint64_t count = std::min(wanted, pairs);

    // Floyd's sampling of `count` distinct indices out of `pairs`.
    std::unordered_set<std::uint64_t> picked;
    picked.reserve(static_cast<std::size_t>(count) * 2);
    for (std::uint64_t j = pairs - count; j < pairs; ++j) {
        const std::uint64_t t = random.below(j + 1);
        if (!picked.insert(t).second)
            picked.insert(j);
    }
    std::vector<std::uint64_t> indices(picked.begin(), picked.end());
    std::sort(indices.begin(), indices.end());
    for (std::uint64_t index : indices) {
        const auto it = std::upper_bound(first_index.begin(), first_index.end(), index);
        const std::size_t merge_slot = static_cast<std::size_t>(it - first_index.begin()) - 1;
        arcs.push_back({forks[index - first_index[merge_slot]], merges[merge_slot]});
    }

    planted_instance result{dag::from_arcs(n, std::move(arcs)), std::move(labels)};
    return result;
}

dag add_noise_arcs(const dag& g, std::size_t s, std::uint64_t seed)
{
    const std::size_t n = g.vertex_count();
    const std::uint64_t forward_pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::uint64_t free_slots = forward_pairs - g.arc_count();
    if (s > free_slots)
        throw error(error_code::not_enough_slots, "requested " + std::to_string(s) + " noise arcs but only " +
                                                      std::to_string(free_slots) + " forward pairs are free");
    if (s == 0)
        return g;

    const auto order = g.topo_order();
    rng random(seed);
    std::vector<arc> added;
    if (s <= free_slots / 2) {
        // Rejection: positions i < j uniform, skip existing or repeated arcs.
        std::set<arc> chosen;
        while (added.size() < s) {
            const auto i = static_cast<std::size_t>(random.below(n));
            const auto j = static_cast<std::size_t>(random.below(n));
            if (i >= j)
                continue;
            const arc a{order[i], order[j]};
            if (g.has_arc(a.tail, a.head) || !chosen.insert(a).second)
                continue;
            added.push_back(a);
        }
    } else {
        // Dense case: list every free pair and take a random prefix.
        std::vector<arc> free_pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!g.has_arc(order[i], order[j]))
                    free_pairs.push_back({order[i], order[j]});
        for (std::size_t k = 0; k < s; ++k) {
            const auto pick = k + static_cast<std::size_t>(random.below(free_pairs.size() - k));
            std::swap(free_pairs[k], free_pairs[pick]);
            added.push_back(free_pairs[k]);
        }
    }
    std::vector<arc> arcs(g.arcs().begin(), g.arcs().end());
    arcs.insert(arcs.end(), added.begin(), added.end());
    return dag::from_arcs(n, std::move(arcs));
}

dag extremal_funnel(std::size_t n)
{
    const std::size_t forks = n / 2;
    std::vector<arc> arcs;
    for (std::size_t f = 1; f < forks; ++f)
        arcs.push_back({0, static_cast<vertex_id>(f)});
    for (std::size_t m = forks; m + 1 < n; ++m)
        arcs.push_back({static_cast<vertex_id>(m), static_cast<vertex_id>(n - 1)});
    for (std::size_t f = 0; f < forks; ++f)
        for (std::size_t m = forks; m < n; ++m)
            arcs.push_back({static_cast<vertex_id>(f), static_cast<vertex_id>(m)});
    return dag::from_arcs(n, std::move(arcs));
}

void validate_3cnf(const cnf_formula& formula)
{
    for (std::size_t c = 0; c < formula.clauses.size(); ++c) {
        const auto& clause = formula.clauses[c];
        const std::string where = "clause " + std::to_string(c + 1);
        if (clause.size() != 3)
            throw error(error_code::invalid_formula, where + " does not have exactly three literals");
        std::set<std::size_t> vars;
        for (int lit : clause) {
            const auto var = static_cast<std::size_t>(std::abs(lit));
            if (lit == 0 || var > formula.variable_count)
                throw error(error_code::invalid_formula, where + " has literal out of range");
            vars.insert(var);
        }
        if (vars.size() != 3)
            throw error(error_code::invalid_formula, where + " repeats a variable");
    }
}

cnf_formula parse_dimacs(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    cnf_formula formula;
    bool header = false;
    std::size_t announced = 0;
    std::vector<int> current;
    while (std::getline(in, line)) {
        std::istringstream tokens(line);
        std::string first;
        if (!(tokens >> first) || first == "c" || first[0] == 'c')
            continue;
        if (first == "%")
            break;
        if (first == "p") {
            std::string kind;
            if (header || !(tokens >> kind >> formula.variable_count >> announced) || kind != "cnf")
                throw error(error_code::invalid_formula, "bad DIMACS header: " + line);
            header = true;
            continue;
        }
        if (!header)
            throw error(error_code::invalid_formula, "clause before DIMACS header");
        std::istringstream literals(line);
        long long lit;
        while (literals >> lit) {
            if (lit == 0) {
                formula.clauses.push_back(current);
                current.clear();
            } else {
                if (static_cast<std::size_t>(std::llabs(lit)) > formula.variable_count)
                    throw error(error_code::invalid_formula, "literal " + std::to_string(lit) + " out of range");
                current.push_back(static_cast<int>(lit));
            }
        }
        if (!literals.eof())
            throw error(error_code::invalid_formula, "non-numeric token in: " + line);
    }
    if (!header)
        throw error(error_code::invalid_formula, "missing DIMACS header");
    if (!current.empty())
        throw error(error_code::invalid_formula, "last clause is not terminated by 0");
    if (formula.clauses.size() != announced)
        throw error(error_code::invalid_formula, "header announces " + std::to_string(announced) +
                                                     " clauses but " + std::to_string(formula.clauses.size()) +
                                                     " were read");
    return formula;
}

std::string emit_dimacs(const cnf_formula& formula)
{
    std::ostringstream out;
    out << "p cnf " << formula.variable_count << ' ' << formula.clauses.size() << '\n';
    for (const auto& clause : formula.clauses) {
        for (int lit : clause)
            out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

bool sat_oracle(const cnf_formula& formula)
{
    const std::size_t n = formula.variable_count;
    if (n > 20)
        throw error(error_code::too_large, "exhaustive SAT check is limited to 20 variables");
    for (std::uint32_t assignment = 0; assignment < (1u << n); ++assignment) {
        const bool all = std::all_of(formula.clauses.begin(), formula.clauses.end(), [&](const auto& clause) {
            return std::any_of(clause.begin(), clause.end(), [&](int lit) {
                const bool value = (assignment >> (std::abs(lit) - 1)) & 1u;
                return lit > 0 ? value : !value;
            });
        });
        if (all)
            return true;
    }
    return false;
}

reduction reduce_3sat(const cnf_formula& formula)
{
    validate_3cnf(formula);
    const std::size_t n = formula.variable_count;
    const std::size_t m = formula.clauses.size();
    auto var_vertex = [](std::size_t x, std::size_t role) { return static_cast<vertex_id>(6 * x + role); };
    auto clause_vertex = [n](std::size_t c, std::size_t role) { return static_cast<vertex_id>(6 * n + 5 * c + role); };

    std::vector<arc> arcs;
    for (std::size_t x = 0; x < n; ++x) {
        arcs.push_back({var_vertex(x, 1), var_vertex(x, 0)});
        arcs.push_back({var_vertex(x, 2), var_vertex(x, 0)});
        for (std::size_t i = 3; i <= 5; ++i)
            arcs.push_back({var_vertex(x, 0), var_vertex(x, i)});
    }
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t i = 1; i <= 4; ++i)
            arcs.push_back({clause_vertex(c, i), clause_vertex(c, 0)});
        for (int lit : formula.clauses[c]) {
            const auto x = static_cast<std::size_t>(std::abs(lit)) - 1;
            arcs.push_back({clause_vertex(c, 0), var_vertex(x, lit > 0 ? 1 : 2)});
        }
    }
    return {dag::from_arcs(6 * n + 5 * m, std::move(arcs)), 2 * m + n};
}

}  // namespace funnel
