#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "funnel/dag.hpp"
#include "funnel/labeling.hpp"
#include "funnel/recognition.hpp"

namespace funnel {

// Search-tree node: the host DAG with some arcs moved into the partial
// solution, plus a partial labeling. Changes are recorded on a trail so the
// solver can roll back to an earlier mark instead of copying the state;
// copies are independent.
class solver_state {
public:
    // Keeps a reference to g, which must outlive the state.
    explicit solver_state(const dag& g);
    explicit solver_state(dag&&) = delete;

    const dag& graph() const noexcept { return *graph_; }

    label label_of(vertex_id v) const { return labels_[v]; }
    const labeling& labels() const noexcept { return labels_; }
    bool is_live(arc_id a) const { return live_[a]; }
    std::size_t live_in_degree(vertex_id v) const { return live_in_[v]; }
    std::size_t live_out_degree(vertex_id v) const { return live_out_[v]; }

    // Arcs moved into the partial solution, in the order they were removed.
    const std::vector<arc_id>& removed_arcs() const noexcept { return removed_; }
    std::size_t removed_count() const noexcept { return removed_.size(); }
    arc_set partial_solution() const;

    void set_label(vertex_id v, label l);
    void remove_arc(arc_id a);

    std::size_t mark() const noexcept { return trail_.size(); }
    void undo(std::size_t mark);

    // Set Label: exhaustively labels vertices whose live degrees and
    // neighbor labels decide the label. Returns the number of labels set.
    std::size_t apply_set_label();
    // Satisfy Label: exhaustively removes the arcs a labeled vertex cannot
    // keep. Returns the number of arcs removed.
    std::size_t apply_satisfy_label();
    // Both rules to a common fixpoint.
    void reduce();

    // Smallest-topological-position vertex the Label Branch applies to.
    std::optional<vertex_id> label_branch_vertex() const;
    // Smallest-topological-position vertex the Arc Branch applies to.
    std::optional<vertex_id> arc_branch_vertex() const;
    bool arc_branch_applies(vertex_id v) const;

    // Greedy packing of arc-disjoint forbidden subgraphs in the live graph.
    std::size_t lower_bound() const;

    bool live_graph_is_funnel() const;
    dag live_graph() const;

    void set_trace(std::ostream* trace) { trace_ = trace; }

private:
    friend class exact_search;

    bool set_label_at(vertex_id v);
    bool satisfy_label_at(vertex_id v);
    bool satisfy_needed(vertex_id v) const;
    void touch(vertex_id v);
    void touch_neighbors(vertex_id v);
    std::size_t unlabeled_in(vertex_id v) const { return live_in_[v] - in_fork_[v] - in_merge_[v]; }
    std::size_t unlabeled_out(vertex_id v) const { return live_out_[v] - out_fork_[v] - out_merge_[v]; }
    void count_label(vertex_id v, label l, int delta);

    struct trail_entry {
        bool is_label;
        std::uint32_t id;
    };

    const dag* graph_;
    labeling labels_;
    std::vector<bool> live_;
    std::vector<std::size_t> live_in_, live_out_;
    std::vector<std::size_t> in_fork_, in_merge_, out_fork_, out_merge_;
    std::vector<arc_id> removed_;
    std::vector<trail_entry> trail_;
    std::vector<vertex_id> pending_;
    std::vector<bool> is_pending_;
    std::ostream* trace_ = nullptr;
    std::uint64_t rule_labels_ = 0;
    std::uint64_t rule_removals_ = 0;
};

// Label Branch: children with v labeled Fork and Merge, in that order.
// Throws not_applicable unless label_branch_vertex-style conditions hold at v.
std::vector<solver_state> branch_label(const solver_state& state, vertex_id v);
// Arc Branch: one child per live arc on v's constrained side, keeping that
// arc and removing the others. Throws not_applicable.
std::vector<solver_state> branch_arcs(const solver_state& state, vertex_id v);

// Lower bound for the whole graph (a fresh state's packing).
std::size_t lower_bound(const dag& g);

struct solver_stats {
    std::uint64_t nodes = 0;
    std::uint64_t labels_set = 0;
    std::uint64_t arcs_satisfied = 0;
    std::uint64_t label_branches = 0;
    std::uint64_t arc_branches = 0;
    std::uint64_t pruned = 0;
    std::uint64_t leaves = 0;
};

struct exact_result {
    std::size_t distance = 0;
    arc_set deletion_set;
    labeling labels;
    solver_stats stats;
    std::size_t root_lower_bound = 0;
    // False when the time limit cut the search short; distance is then the
    // best upper bound found.
    bool optimal = true;
};

struct solver_options {
    // Search only for solutions of at most this size first. An underestimate
    // costs a second search but never changes the answer.
    std::optional<std::size_t> initial_upper_bound;
    // Soft limit, checked between search nodes.
    std::optional<std::chrono::milliseconds> time_limit;
    // Off: plain label branching over all vertices with greedy completion at
    // the leaves and no lower-bound pruning. Exponential in |V|; for tests.
    bool reduction_rules = true;
    // One line per rule or branch application.
    std::ostream* trace = nullptr;
};

exact_result solve_addf(const dag& g, const solver_options& options = {});

// Enumerates arc subsets by increasing size; ties go to the lexicographically
// smallest subset. Throws too_large above `max_arcs` arcs.
exact_result brute_force_addf(const dag& g, std::size_t max_arcs = 24);

}  // namespace funnel
