#include "funnel/dag.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace funnel {

const char* to_string(error_code code)
{
    switch (code) {
    case error_code::cycle_detected: return "CycleDetected";
    case error_code::self_loop: return "SelfLoop";
    case error_code::duplicate_arc: return "DuplicateArc";
    case error_code::malformed_line: return "MalformedLine";
    case error_code::arc_not_present: return "ArcNotPresent";
    case error_code::not_a_funnel: return "NotAFunnel";
    case error_code::partial_labeling: return "PartialLabeling";
    case error_code::not_applicable: return "NotApplicable";
    case error_code::too_large: return "TooLarge";
    case error_code::not_enough_slots: return "NotEnoughSlots";
    case error_code::invalid_formula: return "InvalidFormula";
    case error_code::domain_error: return "DomainError";
    }
    return "Unknown";
}

error::error(error_code code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

arc_set::arc_set(std::initializer_list<arc> arcs) : arc_set(std::vector<arc>(arcs)) {}

arc_set::arc_set(std::vector<arc> arcs) : arcs_(std::move(arcs))
{
    std::sort(arcs_.begin(), arcs_.end());
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
}

bool arc_set::contains(arc a) const
{
    return std::binary_search(arcs_.begin(), arcs_.end(), a);
}

void arc_set::insert(arc a)
{
    auto it = std::lower_bound(arcs_.begin(), arcs_.end(), a);
    if (it == arcs_.end() || *it != a)
        arcs_.insert(it, a);
}

namespace {

std::string arc_text(arc a)
{
    return "(" + std::to_string(a.tail) + "," + std::to_string(a.head) + ")";
}

}  // namespace

dag dag::from_arcs(std::size_t vertex_count, std::vector<arc> arcs)
{
    std::sort(arcs.begin(), arcs.end());
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const arc a = arcs[i];
        if (a.tail >= vertex_count || a.head >= vertex_count)
            throw error(error_code::domain_error,
                        "arc " + arc_text(a) + " exceeds vertex count " + std::to_string(vertex_count));
        if (a.tail == a.head)
            throw error(error_code::self_loop, "self-loop at vertex " + std::to_string(a.tail));
        if (i > 0 && arcs[i - 1] == a)
            throw error(error_code::duplicate_arc, "arc " + arc_text(a) + " appears twice");
    }

    dag g;
    g.vertex_count_ = vertex_count;
    g.arcs_ = std::move(arcs);

    const std::size_t n = vertex_count;
    const std::size_t m = g.arcs_.size();
    g.out_offset_.assign(n + 1, 0);
    g.in_offset_.assign(n + 1, 0);
    for (const arc& a : g.arcs_) {
        ++g.out_offset_[a.tail + 1];
        ++g.in_offset_[a.head + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
        g.out_offset_[v + 1] += g.out_offset_[v];
        g.in_offset_[v + 1] += g.in_offset_[v];
    }
    g.out_target_.resize(m);
    g.out_arc_.resize(m);
    g.in_source_.resize(m);
    g.in_arc_.resize(m);
    // Arcs are sorted by (tail, head), so the out lists come out sorted. Filling
    // the in lists in arc order sorts them by tail as well.
    std::vector<std::size_t> in_fill(g.in_offset_.begin(), g.in_offset_.end() - 1);
    for (arc_id id = 0; id < m; ++id) {
        const arc& a = g.arcs_[id];
        g.out_target_[id] = a.head;
        g.out_arc_[id] = id;
        const std::size_t slot = in_fill[a.head]++;
        g.in_source_[slot] = a.tail;
        g.in_arc_[slot] = id;
    }

    g.topo_order_ = topological_order(g);
    if (g.topo_order_.size() != n)
        throw error(error_code::cycle_detected, "input digraph contains a directed cycle");
    g.topo_position_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        g.topo_position_[g.topo_order_[i]] = i;
    return g;
}

std::span<const vertex_id> dag::out_neighbors(vertex_id v) const
{
    return {out_target_.data() + out_offset_[v], out_offset_[v + 1] - out_offset_[v]};
}

std::span<const vertex_id> dag::in_neighbors(vertex_id v) const
{
    return {in_source_.data() + in_offset_[v], in_offset_[v + 1] - in_offset_[v]};
}

std::span<const arc_id> dag::out_arcs(vertex_id v) const
{
    return {out_arc_.data() + out_offset_[v], out_offset_[v + 1] - out_offset_[v]};
}

std::span<const arc_id> dag::in_arcs(vertex_id v) const
{
    return {in_arc_.data() + in_offset_[v], in_offset_[v + 1] - in_offset_[v]};
}

std::optional<arc_id> dag::find_arc(vertex_id tail, vertex_id head) const
{
    if (tail >= vertex_count_)
        return std::nullopt;
    auto targets = out_neighbors(tail);
    auto it = std::lower_bound(targets.begin(), targets.end(), head);
    if (it == targets.end() || *it != head)
        return std::nullopt;
    return out_arcs(tail)[static_cast<std::size_t>(it - targets.begin())];
}

// Returns fewer than vertex_count vertices when the graph has a cycle; from_arcs
// relies on that to detect cycles before the Dag is handed out.
std::vector<vertex_id> topological_order(const dag& g)
{
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> pending(n);
    std::priority_queue<vertex_id, std::vector<vertex_id>, std::greater<>> ready;
    for (vertex_id v = 0; v < n; ++v) {
        pending[v] = g.in_degree(v);
        if (pending[v] == 0)
            ready.push(v);
    }
    std::vector<vertex_id> order;
    order.reserve(n);
    while (!ready.empty()) {
        const vertex_id v = ready.top();
        ready.pop();
        order.push_back(v);
        for (vertex_id w : g.out_neighbors(v))
            if (--pending[w] == 0)
                ready.push(w);
    }
    return order;
}

dag delete_arcs(const dag& g, const arc_set& removed)
{
    for (const arc& a : removed)
        if (!g.has_arc(a.tail, a.head))
            throw error(error_code::arc_not_present, "arc " + arc_text(a) + " is not in the graph");
    std::vector<arc> kept;
    kept.reserve(g.arc_count() - removed.size());
    for (const arc& a : g.arcs())
        if (!removed.contains(a))
            kept.push_back(a);
    return dag::from_arcs(g.vertex_count(), std::move(kept));
}

condensation condense_scc(std::size_t vertex_count, std::span<const arc> arcs)
{
    const std::size_t n = vertex_count;
    std::vector<std::vector<vertex_id>> succ(n);
    for (const arc& a : arcs) {
        if (a.tail >= n || a.head >= n)
            throw error(error_code::domain_error, "arc " + arc_text(a) + " exceeds vertex count");
        succ[a.tail].push_back(a.head);
    }

    // Iterative Tarjan.
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<vertex_id> stack;
    std::vector<std::size_t> raw_component(n, 0);
    std::size_t next_index = 0;
    std::size_t component_count = 0;
    struct frame {
        vertex_id v;
        std::size_t next_child;
    };
    std::vector<frame> call;
    for (vertex_id root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            frame& f = call.back();
            if (f.next_child < succ[f.v].size()) {
                const vertex_id w = succ[f.v][f.next_child++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const vertex_id v = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                vertex_id w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    raw_component[w] = component_count;
                } while (w != v);
                ++component_count;
            }
        }
    }

    // Renumber components by their smallest member.
    constexpr vertex_id unassigned = static_cast<vertex_id>(-1);
    std::vector<vertex_id> renumber(component_count, unassigned);
    vertex_id next = 0;
    condensation result;
    result.component_of.resize(n);
    for (vertex_id v = 0; v < n; ++v) {
        vertex_id& c = renumber[raw_component[v]];
        if (c == unassigned)
            c = next++;
        result.component_of[v] = c;
    }

    std::vector<arc> contracted;
    contracted.reserve(arcs.size());
    for (const arc& a : arcs) {
        const vertex_id s = result.component_of[a.tail];
        const vertex_id t = result.component_of[a.head];
        if (s != t)
            contracted.push_back({s, t});
    }
    std::sort(contracted.begin(), contracted.end());
    contracted.erase(std::unique(contracted.begin(), contracted.end()), contracted.end());
    result.graph = dag::from_arcs(next, std::move(contracted));
    return result;
}

}  // namespace funnel
