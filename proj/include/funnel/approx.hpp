#pragma once

#include <cstddef>
#include <utility>

#include "funnel/dag.hpp"
#include "funnel/labeling.hpp"

namespace funnel {

struct approx_result {
    arc_set deletion_set;
    labeling labels;
    std::size_t size = 0;
};

// Greedy labeling in topological order: Fork when outdegree exceeds
// indegree, Fork on a tie if some in-neighbor is Fork, Merge otherwise.
labeling assign_labels_greedy(const dag& g);

// Arcs to delete so that `labels` becomes a funnel labeling of the rest.
// Each Fork vertex keeps the in-arc from its smallest Fork in-neighbor (if
// any) and loses all others; each Merge vertex keeps the out-arc to its
// smallest Merge out-neighbor (if any) and loses all others.
arc_set arc_deletion_set(const dag& g, const labeling& labels);

// Size of arc_deletion_set(g, labels) without materializing it.
std::size_t arc_deletion_count(const dag& g, const labeling& labels);

struct relabel_options {
    // Repeat passes until no flip improves. One pass otherwise.
    bool until_fixpoint = false;
};

// Visits vertices in topological order and flips a label whenever that
// strictly shrinks the deletion set. Returns the final labeling and its
// deletion set.
std::pair<labeling, arc_set> greedy_relabel(const dag& g, labeling labels, relabel_options options = {});

// Linear-time factor-2 approximation: greedy labels, satisfy them, relabel.
approx_result approximate_addf(const dag& g, relabel_options options = {});

}  // namespace funnel
