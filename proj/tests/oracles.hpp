#pragma once

// Test-only reference implementations. They share no code with the library
// beyond the dag type, and favor obviousness over speed.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "funnel/dag.hpp"

namespace oracle {

using funnel::arc;
using funnel::dag;
using funnel::vertex_id;

// D_k: u1=0, u2=1, path 2..2+k, then w1, w2.
inline dag forbidden(std::size_t k)
{
    std::vector<arc> arcs{{0, 2}, {1, 2}};
    for (std::size_t i = 0; i < k; ++i)
        arcs.push_back({static_cast<vertex_id>(2 + i), static_cast<vertex_id>(3 + i)});
    const auto last = static_cast<vertex_id>(2 + k);
    arcs.push_back({last, last + 1});
    arcs.push_back({last, last + 2});
    return dag::from_arcs(k + 5, arcs);
}

inline dag diamond()
{
    return dag::from_arcs(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

inline dag path(std::size_t n)
{
    std::vector<arc> arcs;
    for (std::size_t i = 0; i + 1 < n; ++i)
        arcs.push_back({static_cast<vertex_id>(i), static_cast<vertex_id>(i + 1)});
    return dag::from_arcs(n, arcs);
}

inline dag disjoint_union(const dag& a, const dag& b)
{
    std::vector<arc> arcs(a.arcs().begin(), a.arcs().end());
    const auto shift = static_cast<vertex_id>(a.vertex_count());
    for (const arc& e : b.arcs())
        arcs.push_back({e.tail + shift, e.head + shift});
    return dag::from_arcs(a.vertex_count() + b.vertex_count(), arcs);
}

// Arcs forward in a random vertex order, each present with probability q.
inline dag random_dag(std::mt19937_64& gen, std::size_t n, double q)
{
    std::vector<vertex_id> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    std::bernoulli_distribution coin(q);
    std::vector<arc> arcs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(gen))
                arcs.push_back({order[i], order[j]});
    return dag::from_arcs(n, arcs);
}

// Random DAG with at most max_arcs arcs.
inline dag random_small_dag(std::mt19937_64& gen, std::size_t max_n, std::size_t max_arcs)
{
    std::uniform_int_distribution<std::size_t> pick_n(1, max_n);
    std::uniform_real_distribution<double> pick_q(0.1, 0.8);
    for (;;) {
        dag g = random_dag(gen, pick_n(gen), pick_q(gen));
        if (g.arc_count() <= max_arcs)
            return g;
    }
}

// Bitmask over the n(n-1)/2 pairs i<j of an n-vertex graph.
inline std::uint32_t pair_bit(std::size_t n, std::size_t i, std::size_t j)
{
    std::size_t index = 0;
    for (std::size_t a = 0; a < i; ++a)
        index += n - 1 - a;
    return 1u << (index + (j - i - 1));
}

// One representative per isomorphism class of DAGs on exactly n vertices
// (n <= 5). Every DAG has a topological numbering, so upper-triangular
// adjacency matrices cover all classes; the canonical form is the smallest
// relabeled arc list over all permutations.
inline std::vector<dag> all_dags(std::size_t n)
{
    if (n > 5)
        throw std::invalid_argument("all_dags supports n <= 5");
    const std::size_t pairs = n * (n - 1) / 2;
    std::vector<std::vector<vertex_id>> perms;
    std::vector<vertex_id> p(n);
    std::iota(p.begin(), p.end(), 0);
    do
        perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));

    std::set<std::vector<arc>> seen;
    std::vector<dag> result;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
        std::vector<arc> arcs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (mask & pair_bit(n, i, j))
                    arcs.push_back({static_cast<vertex_id>(i), static_cast<vertex_id>(j)});
        std::vector<arc> best;
        for (const auto& perm : perms) {
            std::vector<arc> relabeled;
            for (const arc& a : arcs)
                relabeled.push_back({perm[a.tail], perm[a.head]});
            std::sort(relabeled.begin(), relabeled.end());
            if (best.empty() || relabeled < best)
                best = relabeled;
        }
        if (seen.insert(best).second)
            result.push_back(dag::from_arcs(n, arcs));
    }
    return result;
}

// Every source-sink path with at least one arc, as arc lists.
inline std::vector<std::vector<arc>> source_sink_paths(const dag& g)
{
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<vertex_id>> out(n);
    std::vector<std::size_t> indeg(n, 0);
    for (const arc& a : g.arcs()) {
        out[a.tail].push_back(a.head);
        ++indeg[a.head];
    }
    std::vector<std::vector<arc>> paths;
    std::vector<arc> current;
    std::function<void(vertex_id)> walk = [&](vertex_id v) {
        if (out[v].empty()) {
            if (!current.empty())
                paths.push_back(current);
            return;
        }
        for (vertex_id w : out[v]) {
            current.push_back({v, w});
            walk(w);
            current.pop_back();
        }
    };
    for (vertex_id v = 0; v < n; ++v)
        if (indeg[v] == 0)
            walk(v);
    return paths;
}

// Definition by path enumeration: every source-sink path has an arc used by
// no other source-sink path. Graphs up to 12 vertices.
inline bool is_funnel_by_paths(const dag& g)
{
    if (g.vertex_count() > 12)
        throw std::invalid_argument("path enumeration limited to 12 vertices");
    const auto paths = source_sink_paths(g);
    std::map<arc, std::size_t> uses;
    for (const auto& p : paths)
        for (const arc& a : p)
            ++uses[a];
    return std::all_of(paths.begin(), paths.end(), [&](const auto& p) {
        return std::any_of(p.begin(), p.end(), [&](const arc& a) { return uses[a] == 1; });
    });
}

// Reachability-based degree test on an arc subset (mask bit i keeps arc i).
inline bool is_funnel_masked(const dag& g, std::uint64_t keep)
{
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<vertex_id>> out(n);
    std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
    for (std::size_t i = 0; i < g.arc_count(); ++i)
        if (keep >> i & 1) {
            const arc a = g.arcs()[i];
            out[a.tail].push_back(a.head);
            ++indeg[a.head];
            ++outdeg[a.tail];
        }
    for (vertex_id v = 0; v < n; ++v) {
        if (indeg[v] < 2)
            continue;
        std::vector<bool> seen(n, false);
        std::vector<vertex_id> stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            const vertex_id u = stack.back();
            stack.pop_back();
            if (outdeg[u] > 1)
                return false;
            for (vertex_id w : out[u])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
    }
    return true;
}

// Smallest number of arcs whose removal leaves a funnel, by subset
// enumeration in increasing size (Gosper's hack).
inline std::size_t distance_by_subsets(const dag& g)
{
    const std::size_t m = g.arc_count();
    if (m > 24)
        throw std::invalid_argument("subset enumeration limited to 24 arcs");
    const std::uint64_t all = (std::uint64_t{1} << m) - 1;
    for (std::size_t k = 0; k <= m; ++k) {
        if (k == 0) {
            if (is_funnel_masked(g, all))
                return 0;
            continue;
        }
        std::uint64_t s = (std::uint64_t{1} << k) - 1;
        while (s <= all) {
            if (is_funnel_masked(g, all & ~s))
                return k;
            const std::uint64_t c = s & -s;
            const std::uint64_t r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    return m;
}

// All 3-CNF formulas over exactly `vars` variables with `clauses` clauses,
// clauses drawn with repetition from the sorted distinct-variable triples.
inline std::vector<std::vector<std::vector<int>>> all_3cnf(std::size_t vars, std::size_t clauses)
{
    std::vector<std::vector<int>> triples;
    for (int a = 1; a <= static_cast<int>(vars); ++a)
        for (int b = a + 1; b <= static_cast<int>(vars); ++b)
            for (int c = b + 1; c <= static_cast<int>(vars); ++c)
                for (int signs = 0; signs < 8; ++signs)
                    triples.push_back({signs & 1 ? -a : a, signs & 2 ? -b : b, signs & 4 ? -c : c});
    std::vector<std::vector<std::vector<int>>> result{{}};
    for (std::size_t i = 0; i < clauses; ++i) {
        std::vector<std::vector<std::vector<int>>> next;
        for (const auto& f : result)
            for (const auto& t : triples) {
                auto g = f;
                g.push_back(t);
                next.push_back(std::move(g));
            }
        result = std::move(next);
    }
    return result;
}

}  // namespace oracle
