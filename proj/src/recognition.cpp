#include "funnel/recognition.hpp"

#include <algorithm>
#include <deque>

namespace funnel {

std::vector<arc> forbidden_witness::arcs() const
{
    std::vector<arc> result{{u1, path.front()}, {u2, path.front()}};
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        result.push_back({path[i], path[i + 1]});
    result.push_back({path.back(), w1});
    result.push_back({path.back(), w2});
    return result;
}

bool is_valid_witness(const dag& g, const forbidden_witness& w)
{
    if (w.path.empty() || w.u1 == w.u2 || w.w1 == w.w2)
        return false;
    const auto n = g.vertex_count();
    auto in_range = [n](vertex_id v) { return v < n; };
    if (!in_range(w.u1) || !in_range(w.u2) || !in_range(w.w1) || !in_range(w.w2) ||
        !std::all_of(w.path.begin(), w.path.end(), in_range))
        return false;
    for (const arc& a : w.arcs())
        if (!g.has_arc(a.tail, a.head))
            return false;
    return g.in_degree(w.path.front()) >= 2 && g.out_degree(w.path.back()) >= 2;
}

path_counts count_paths(const dag& g)
{
    const auto n = g.vertex_count();
    path_counts counts{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
    for (vertex_id v : g.topo_order()) {
        if (g.in_degree(v) == 0) {
            counts.from_sources[v] = 1;
            continue;
        }
        unsigned sum = 0;
        for (vertex_id u : g.in_neighbors(v))
            sum += counts.from_sources[u];
        counts.from_sources[v] = static_cast<std::uint8_t>(std::min(sum, 2u));
    }
    const auto order = g.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const vertex_id v = *it;
        if (g.out_degree(v) == 0) {
            counts.to_sinks[v] = 1;
            continue;
        }
        unsigned sum = 0;
        for (vertex_id w : g.out_neighbors(v))
            sum += counts.to_sinks[w];
        counts.to_sinks[v] = static_cast<std::uint8_t>(std::min(sum, 2u));
    }
    return counts;
}

std::vector<bool> merge_taint(const dag& g)
{
    std::vector<bool> tainted(g.vertex_count(), false);
    for (vertex_id v : g.topo_order()) {
        if (g.in_degree(v) > 1) {
            tainted[v] = true;
            continue;
        }
        for (vertex_id u : g.in_neighbors(v))
            if (tainted[u])
                tainted[v] = true;
    }
    return tainted;
}

bool is_funnel_degree(const dag& g)
{
    const auto tainted = merge_taint(g);
    for (vertex_id v = 0; v < g.vertex_count(); ++v)
        if (tainted[v] && g.out_degree(v) > 1)
            return false;
    return true;
}

bool is_funnel_private_arc(const dag& g)
{
    const path_counts counts = count_paths(g);
    // An arc (u,v) is private iff from_sources[u] * to_sinks[v] == 1. Look for
    // a source-sink path built only from shared arcs: shared_reach[v] holds if
    // some source reaches v along shared arcs alone.
    std::vector<bool> shared_reach(g.vertex_count(), false);
    for (vertex_id v : g.topo_order()) {
        if (g.in_degree(v) == 0) {
            shared_reach[v] = true;
            continue;
        }
        for (vertex_id u : g.in_neighbors(v)) {
            const bool is_private = counts.from_sources[u] == 1 && counts.to_sinks[v] == 1;
            if (!is_private && shared_reach[u]) {
                shared_reach[v] = true;
                break;
            }
        }
        if (shared_reach[v] && g.out_degree(v) == 0)
            return false;
    }
    return true;
}

std::optional<forbidden_witness> find_forbidden_witness(const dag& g)
{
    const auto tainted = merge_taint(g);
    std::optional<vertex_id> end;
    for (vertex_id v : g.topo_order()) {
        if (tainted[v] && g.out_degree(v) > 1) {
            end = v;
            break;
        }
    }
    if (!end)
        return std::nullopt;

    // Backward BFS for the nearest ancestor with indegree > 1. Every vertex on
    // the way is tainted with indegree exactly 1, so the search is a chain
    // walk in practice, but BFS keeps it shortest regardless.
    constexpr vertex_id none = static_cast<vertex_id>(-1);
    std::vector<vertex_id> next_on_path(g.vertex_count(), none);
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<vertex_id> queue{*end};
    seen[*end] = true;
    vertex_id start = none;
    while (!queue.empty()) {
        const vertex_id v = queue.front();
        queue.pop_front();
        if (g.in_degree(v) > 1) {
            start = v;
            break;
        }
        for (vertex_id u : g.in_neighbors(v)) {
            if (!seen[u] && tainted[u]) {
                seen[u] = true;
                next_on_path[u] = v;
                queue.push_back(u);
            }
        }
    }

    forbidden_witness w;
    for (vertex_id v = start; v != none; v = next_on_path[v])
        w.path.push_back(v);
    w.u1 = g.in_neighbors(start)[0];
    w.u2 = g.in_neighbors(start)[1];
    w.w1 = g.out_neighbors(*end)[0];
    w.w2 = g.out_neighbors(*end)[1];
    return w;
}

labeling funnel_labeling(const dag& g)
{
    if (!is_funnel_degree(g))
        throw error(error_code::not_a_funnel, "graph contains a forbidden subgraph");
    const auto tainted = merge_taint(g);
    labeling labels(g.vertex_count());
    for (vertex_id v = 0; v < g.vertex_count(); ++v)
        labels[v] = tainted[v] ? label::merge : label::fork;
    return labels;
}

bool verify_funnel_labeling(const dag& g, const labeling& labels)
{
    if (labels.size() != g.vertex_count() || !labels.is_total())
        throw error(error_code::partial_labeling, "labeling must assign F or M to every vertex");
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        if (labels[v] == label::fork && g.in_degree(v) > 1)
            return false;
        if (labels[v] == label::merge && g.out_degree(v) > 1)
            return false;
    }
    for (const arc& a : g.arcs())
        if (labels[a.tail] == label::merge && labels[a.head] == label::fork)
            return false;
    return true;
}

std::uint64_t max_arc_bound(std::uint64_t n)
{
    if (n < 2)
        throw error(error_code::domain_error, "arc bound needs at least two vertices");
    return n * n / 4 + n - 2;
}

}  // namespace funnel
