#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "funnel/dag.hpp"
#include "funnel/labeling.hpp"

namespace funnel {

// Edge-list text: one "<tail> <head>" per line, '#' starts a comment line, and
// an optional first line "p <n> <m>" fixes the vertex and arc counts.
dag parse_edge_list(std::string_view text);

// Arc list that may contain cycles, self-loops and repeated arcs; the input to
// condense_scc. With `named` set, tokens are arbitrary strings mapped to dense
// ids in order of first appearance.
struct raw_digraph {
    std::size_t vertex_count = 0;
    std::vector<arc> arcs;
    std::vector<std::string> names;  // empty unless parsed with named = true
};

raw_digraph parse_raw_digraph(std::string_view text, bool named = false);

// Writes the "p" header followed by the arcs in sorted order.
std::string emit_edge_list(const dag& g);

// Highlighted arcs are drawn dashed. With a labeling, nodes carry their label.
std::string emit_dot(const dag& g, const arc_set& highlight = {},
                     const std::optional<labeling>& labels = std::nullopt);

// One "<vertex-id> <F|M>" line per labeled vertex.
std::string emit_labeling(const labeling& labels);
labeling parse_labeling(std::string_view text, std::size_t vertex_count);

}  // namespace funnel
