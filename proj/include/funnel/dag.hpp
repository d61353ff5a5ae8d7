#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace funnel {

using vertex_id = std::uint32_t;
using arc_id = std::uint32_t;

struct arc {
    vertex_id tail = 0;
    vertex_id head = 0;

    friend auto operator<=>(const arc&, const arc&) = default;
};

enum class error_code {
    cycle_detected,
    self_loop,
    duplicate_arc,
    malformed_line,
    arc_not_present,
    not_a_funnel,
    partial_labeling,
    not_applicable,
    too_large,
    not_enough_slots,
    invalid_formula,
    domain_error,
};

const char* to_string(error_code code);

// Every recoverable failure in the library is reported through this type.
class error : public std::runtime_error {
public:
    error(error_code code, const std::string& message);

    error_code code() const noexcept { return code_; }

private:
    error_code code_;
};

// Sorted, duplicate-free set of arcs.
class arc_set {
public:
    arc_set() = default;
    arc_set(std::initializer_list<arc> arcs);
    explicit arc_set(std::vector<arc> arcs);

    bool contains(arc a) const;
    void insert(arc a);
    std::size_t size() const noexcept { return arcs_.size(); }
    bool empty() const noexcept { return arcs_.empty(); }

    std::span<const arc> arcs() const noexcept { return arcs_; }
    auto begin() const noexcept { return arcs_.begin(); }
    auto end() const noexcept { return arcs_.end(); }

    friend bool operator==(const arc_set&, const arc_set&) = default;

private:
    std::vector<arc> arcs_;
};

// Immutable simple DAG. Arcs are stored sorted by (tail, head); arc ids index
// into that order. Neighbor lists are sorted by vertex id.
class dag {
public:
    dag() = default;

    // Validates simplicity and acyclicity; throws error on violation.
    static dag from_arcs(std::size_t vertex_count, std::vector<arc> arcs);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t arc_count() const noexcept { return arcs_.size(); }

    std::span<const arc> arcs() const noexcept { return arcs_; }
    const arc& arc_at(arc_id id) const { return arcs_[id]; }

    std::span<const vertex_id> out_neighbors(vertex_id v) const;
    std::span<const vertex_id> in_neighbors(vertex_id v) const;
    // Arc ids parallel to out_neighbors / in_neighbors.
    std::span<const arc_id> out_arcs(vertex_id v) const;
    std::span<const arc_id> in_arcs(vertex_id v) const;

    std::size_t out_degree(vertex_id v) const { return out_offset_[v + 1] - out_offset_[v]; }
    std::size_t in_degree(vertex_id v) const { return in_offset_[v + 1] - in_offset_[v]; }

    std::span<const vertex_id> topo_order() const noexcept { return topo_order_; }
    std::size_t topo_position(vertex_id v) const { return topo_position_[v]; }

    std::optional<arc_id> find_arc(vertex_id tail, vertex_id head) const;
    bool has_arc(vertex_id tail, vertex_id head) const { return find_arc(tail, head).has_value(); }

    friend bool operator==(const dag& a, const dag& b)
    {
        return a.vertex_count_ == b.vertex_count_ && a.arcs_ == b.arcs_;
    }

private:
    std::size_t vertex_count_ = 0;
    std::vector<arc> arcs_;
    std::vector<std::size_t> out_offset_{0};
    std::vector<vertex_id> out_target_;
    std::vector<arc_id> out_arc_;
    std::vector<std::size_t> in_offset_{0};
    std::vector<vertex_id> in_source_;
    std::vector<arc_id> in_arc_;
    std::vector<vertex_id> topo_order_;
    std::vector<std::size_t> topo_position_;
};

// Kahn's algorithm with a min-id ready queue. Deterministic.
std::vector<vertex_id> topological_order(const dag& g);

dag delete_arcs(const dag& g, const arc_set& removed);

struct condensation {
    dag graph;
    // component_of[original vertex] = vertex of `graph`.
    std::vector<vertex_id> component_of;
};

// Contracts strongly connected components. Components are numbered by their
// smallest original vertex id, so an acyclic input maps to itself. Self-loops
// and parallel arcs created by the contraction are dropped.
condensation condense_scc(std::size_t vertex_count, std::span<const arc> arcs);

}  // namespace funnel
