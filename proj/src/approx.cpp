#include "funnel/approx.hpp"

#include <vector>

namespace funnel {

namespace {

void require_total(const dag& g, const labeling& labels)
{
    if (labels.size() != g.vertex_count() || !labels.is_total())
        throw error(error_code::partial_labeling, "labeling must assign F or M to every vertex");
}

// Per-vertex neighbor label counts. The deletion-set size is a function of
// these alone:
//   sum over Merge v of (Out(v) - [merge_out(v) > 0])
// + sum over Fork v  of (In(v)  - [fork_in(v)  > 0])
// - number of Merge->Fork arcs (deleted from both sides, counted twice).
struct neighbor_counts {
    std::vector<std::size_t> fork_in;
    std::vector<std::size_t> merge_out;

    neighbor_counts(const dag& g, const labeling& labels)
        : fork_in(g.vertex_count(), 0), merge_out(g.vertex_count(), 0)
    {
        for (const arc& a : g.arcs()) {
            if (labels[a.tail] == label::fork)
                ++fork_in[a.head];
            if (labels[a.head] == label::merge)
                ++merge_out[a.tail];
        }
    }
};

// Cost attributable to v's label: v's own term, the [> 0] indicators of
// neighbors whose count depends on v, and the Merge->Fork arcs at v.
// `as` is the label v is evaluated with; `current` is v's actual label, which
// the stored counts reflect.
long long local_cost(const dag& g, const labeling& labels, const neighbor_counts& counts, vertex_id v, label as)
{
    const label current = labels[v];
    long long cost = 0;
    if (as == label::fork)
        cost += static_cast<long long>(g.in_degree(v)) - (counts.fork_in[v] > 0 ? 1 : 0);
    else
        cost += static_cast<long long>(g.out_degree(v)) - (counts.merge_out[v] > 0 ? 1 : 0);

    for (vertex_id x : g.in_neighbors(v)) {
        if (labels[x] != label::merge)
            continue;
        std::size_t merge_out = counts.merge_out[x];
        merge_out = merge_out - (current == label::merge ? 1 : 0) + (as == label::merge ? 1 : 0);
        cost -= merge_out > 0 ? 1 : 0;
    }
    for (vertex_id y : g.out_neighbors(v)) {
        if (labels[y] != label::fork)
            continue;
        std::size_t fork_in = counts.fork_in[y];
        fork_in = fork_in - (current == label::fork ? 1 : 0) + (as == label::fork ? 1 : 0);
        cost -= fork_in > 0 ? 1 : 0;
    }
    // Merge->Fork arcs at v, each counted once too often by the own terms.
    const std::size_t cross =
        as == label::fork ? g.in_degree(v) - counts.fork_in[v] : g.out_degree(v) - counts.merge_out[v];
    cost -= static_cast<long long>(cross);
    return cost;
}

}  // namespace

labeling assign_labels_greedy(const dag& g)
{
    labeling labels(g.vertex_count());
    for (vertex_id v : g.topo_order()) {
        const std::size_t in = g.in_degree(v);
        const std::size_t out = g.out_degree(v);
        label l = label::merge;
        if (out > in) {
            l = label::fork;
        } else if (out == in) {
            for (vertex_id u : g.in_neighbors(v))
                if (labels[u] == label::fork)
                    l = label::fork;
        }
        labels[v] = l;
    }
    return labels;
}

arc_set arc_deletion_set(const dag& g, const labeling& labels)
{
    require_total(g, labels);
    std::vector<bool> removed(g.arc_count(), false);
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        // Neighbor lists are sorted, so the first match is the min-id one.
        if (labels[v] == label::merge) {
            const auto targets = g.out_neighbors(v);
            const auto ids = g.out_arcs(v);
            bool kept = false;
            for (std::size_t i = 0; i < targets.size(); ++i) {
                if (!kept && labels[targets[i]] == label::merge)
                    kept = true;
                else
                    removed[ids[i]] = true;
            }
        } else {
            const auto sources = g.in_neighbors(v);
            const auto ids = g.in_arcs(v);
            bool kept = false;
            for (std::size_t i = 0; i < sources.size(); ++i) {
                if (!kept && labels[sources[i]] == label::fork)
                    kept = true;
                else
                    removed[ids[i]] = true;
            }
        }
    }
    std::vector<arc> result;
    for (arc_id id = 0; id < g.arc_count(); ++id)
        if (removed[id])
            result.push_back(g.arc_at(id));
    return arc_set(std::move(result));
}

std::size_t arc_deletion_count(const dag& g, const labeling& labels)
{
    require_total(g, labels);
    const neighbor_counts counts(g, labels);
    std::size_t total = 0;
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        if (labels[v] == label::merge)
            total += g.out_degree(v) - (counts.merge_out[v] > 0 ? 1 : 0);
        else
            total += g.in_degree(v) - (counts.fork_in[v] > 0 ? 1 : 0);
    }
    for (const arc& a : g.arcs())
        if (labels[a.tail] == label::merge && labels[a.head] == label::fork)
            --total;
    return total;
}

std::pair<labeling, arc_set> greedy_relabel(const dag& g, labeling labels, relabel_options options)
{
    require_total(g, labels);
    neighbor_counts counts(g, labels);
    bool changed = true;
    while (changed) {
        changed = false;
        for (vertex_id v : g.topo_order()) {
            const label current = labels[v];
            const label other = flipped(current);
            if (local_cost(g, labels, counts, v, other) >= local_cost(g, labels, counts, v, current))
                continue;
            labels[v] = other;
            changed = true;
            for (vertex_id y : g.out_neighbors(v)) {
                if (other == label::fork)
                    ++counts.fork_in[y];
                else
                    --counts.fork_in[y];
            }
            for (vertex_id x : g.in_neighbors(v)) {
                if (other == label::merge)
                    ++counts.merge_out[x];
                else
                    --counts.merge_out[x];
            }
        }
        if (!options.until_fixpoint)
            break;
    }
    arc_set deletions = arc_deletion_set(g, labels);
    return {std::move(labels), std::move(deletions)};
}

approx_result approximate_addf(const dag& g, relabel_options options)
{
    auto [labels, deletions] = greedy_relabel(g, assign_labels_greedy(g), options);
    approx_result result;
    result.size = deletions.size();
    result.deletion_set = std::move(deletions);
    result.labels = std::move(labels);
    return result;
}

}  // namespace funnel
