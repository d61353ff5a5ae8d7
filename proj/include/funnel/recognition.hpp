#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "funnel/dag.hpp"
#include "funnel/labeling.hpp"

namespace funnel {

// Occurrence of the forbidden subgraph D_k: u1,u2 -> path[0] -> ... ->
// path[k] -> w1,w2.
struct forbidden_witness {
    vertex_id u1 = 0;
    vertex_id u2 = 0;
    std::vector<vertex_id> path;
    vertex_id w1 = 0;
    vertex_id w2 = 0;

    std::vector<arc> arcs() const;

    friend bool operator==(const forbidden_witness&, const forbidden_witness&) = default;
};

bool is_valid_witness(const dag& g, const forbidden_witness& w);

// Number of source-to-v paths and v-to-sink paths, saturated at 2.
struct path_counts {
    std::vector<std::uint8_t> from_sources;
    std::vector<std::uint8_t> to_sinks;
};

path_counts count_paths(const dag& g);

// tainted[v] iff v or one of its ancestors has indegree > 1.
std::vector<bool> merge_taint(const dag& g);

// No vertex reachable from (or equal to) a vertex of indegree > 1 has
// outdegree > 1.
bool is_funnel_degree(const dag& g);

// Every source-sink path has an arc that no other source-sink path uses.
// Decided with saturated path counts, independently of the degree test.
bool is_funnel_private_arc(const dag& g);

// Empty iff g is a funnel. The witness ends at the first vertex, in
// topological order, that is tainted and has two out-arcs; its path is a
// shortest one reaching back to a vertex of indegree > 1.
std::optional<forbidden_witness> find_forbidden_witness(const dag& g);

// Canonical funnel labeling: Merge iff the vertex or an ancestor has
// indegree > 1. Throws not_a_funnel.
labeling funnel_labeling(const dag& g);

// Fork vertices have indegree <= 1, Merge vertices outdegree <= 1, and no arc
// runs from Merge to Fork. Throws partial_labeling on an incomplete labeling.
bool verify_funnel_labeling(const dag& g, const labeling& labels);

// floor(n^2 / 4) + n - 2, the largest arc count of a funnel on n >= 2 vertices.
std::uint64_t max_arc_bound(std::uint64_t n);

}  // namespace funnel
