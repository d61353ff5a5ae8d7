#include "funnel/exact.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "funnel/approx.hpp"

namespace funnel {

namespace {

char label_char(label l)
{
    return l == label::fork ? 'F' : l == label::merge ? 'M' : '?';
}

}  // namespace

solver_state::solver_state(const dag& g)
    : graph_(&g),
      labels_(g.vertex_count()),
      live_(g.arc_count(), true),
      live_in_(g.vertex_count()),
      live_out_(g.vertex_count()),
      in_fork_(g.vertex_count(), 0),
      in_merge_(g.vertex_count(), 0),
      out_fork_(g.vertex_count(), 0),
      out_merge_(g.vertex_count(), 0),
      is_pending_(g.vertex_count(), false)
{
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        live_in_[v] = g.in_degree(v);
        live_out_[v] = g.out_degree(v);
    }
    // Everything is a rule candidate initially; reverse so the stack pops in
    // topological order.
    const auto order = g.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        touch(*it);
}

arc_set solver_state::partial_solution() const
{
    std::vector<arc> arcs;
    arcs.reserve(removed_.size());
    for (arc_id a : removed_)
        arcs.push_back(graph_->arc_at(a));
    return arc_set(std::move(arcs));
}

void solver_state::touch(vertex_id v)
{
    if (!is_pending_[v]) {
        is_pending_[v] = true;
        pending_.push_back(v);
    }
}

void solver_state::touch_neighbors(vertex_id v)
{
    const dag& g = *graph_;
    const auto out = g.out_neighbors(v);
    const auto out_ids = g.out_arcs(v);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (live_[out_ids[i]])
            touch(out[i]);
    const auto in = g.in_neighbors(v);
    const auto in_ids = g.in_arcs(v);
    for (std::size_t i = 0; i < in.size(); ++i)
        if (live_[in_ids[i]])
            touch(in[i]);
}

void solver_state::count_label(vertex_id v, label l, int delta)
{
    const dag& g = *graph_;
    const auto out = g.out_neighbors(v);
    const auto out_ids = g.out_arcs(v);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!live_[out_ids[i]])
            continue;
        auto& counter = l == label::fork ? in_fork_[out[i]] : in_merge_[out[i]];
        counter = static_cast<std::size_t>(static_cast<long long>(counter) + delta);
    }
    const auto in = g.in_neighbors(v);
    const auto in_ids = g.in_arcs(v);
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (!live_[in_ids[i]])
            continue;
        auto& counter = l == label::fork ? out_fork_[in[i]] : out_merge_[in[i]];
        counter = static_cast<std::size_t>(static_cast<long long>(counter) + delta);
    }
}

void solver_state::set_label(vertex_id v, label l)
{
    if (labels_[v] != label::unassigned || l == label::unassigned)
        throw std::logic_error("set_label: vertex already labeled or label unassigned");
    labels_[v] = l;
    count_label(v, l, +1);
    trail_.push_back({true, v});
    touch(v);
    touch_neighbors(v);
}

void solver_state::remove_arc(arc_id a)
{
    if (!live_[a])
        throw error(error_code::arc_not_present, "arc already removed");
    const arc& e = graph_->arc_at(a);
    live_[a] = false;
    --live_out_[e.tail];
    --live_in_[e.head];
    if (labels_[e.head] == label::fork)
        --out_fork_[e.tail];
    else if (labels_[e.head] == label::merge)
        --out_merge_[e.tail];
    if (labels_[e.tail] == label::fork)
        --in_fork_[e.head];
    else if (labels_[e.tail] == label::merge)
        --in_merge_[e.head];
    removed_.push_back(a);
    trail_.push_back({false, a});
    touch(e.tail);
    touch(e.head);
}

void solver_state::undo(std::size_t mark)
{
    while (trail_.size() > mark) {
        const trail_entry entry = trail_.back();
        trail_.pop_back();
        if (entry.is_label) {
            const vertex_id v = entry.id;
            count_label(v, labels_[v], -1);
            labels_[v] = label::unassigned;
            touch(v);
            touch_neighbors(v);
            continue;
        }
        const arc_id a = entry.id;
        const arc& e = graph_->arc_at(a);
        live_[a] = true;
        ++live_out_[e.tail];
        ++live_in_[e.head];
        if (labels_[e.head] == label::fork)
            ++out_fork_[e.tail];
        else if (labels_[e.head] == label::merge)
            ++out_merge_[e.tail];
        if (labels_[e.tail] == label::fork)
            ++in_fork_[e.head];
        else if (labels_[e.tail] == label::merge)
            ++in_merge_[e.head];
        removed_.pop_back();
        touch(e.tail);
        touch(e.head);
    }
}

bool solver_state::set_label_at(vertex_id v)
{
    if (labels_[v] != label::unassigned)
        return false;
    const std::size_t in = live_in_[v];
    const std::size_t out = live_out_[v];
    label l = label::unassigned;
    // Sources and sinks first, so a sink below a Fork still becomes Merge.
    if (in == 0)
        l = label::fork;
    else if (out == 0)
        l = label::merge;
    else if ((in == 1 && in_fork_[v] == 1) || (out > 1 && in == 1 && unlabeled_out(v) == 0))
        l = label::fork;
    else if ((out == 1 && out_merge_[v] == 1) || (out == 1 && in > 1 && unlabeled_in(v) == 0))
        l = label::merge;
    if (l == label::unassigned)
        return false;
    if (trace_)
        *trace_ << "RR1 " << v << ' ' << label_char(l) << '\n';
    set_label(v, l);
    ++rule_labels_;
    return true;
}

bool solver_state::satisfy_needed(vertex_id v) const
{
    if (labels_[v] == label::fork)
        return (in_fork_[v] > 0 && live_in_[v] > 1) || (in_fork_[v] == 0 && in_merge_[v] > 0);
    if (labels_[v] == label::merge)
        return (out_merge_[v] > 0 && live_out_[v] > 1) || (out_merge_[v] == 0 && out_fork_[v] > 0);
    return false;
}

bool solver_state::satisfy_label_at(vertex_id v)
{
    if (!satisfy_needed(v))
        return false;
    const dag& g = *graph_;
    const bool fork = labels_[v] == label::fork;
    const label same = labels_[v];
    const label other = flipped(same);
    const auto nbrs = fork ? g.in_neighbors(v) : g.out_neighbors(v);
    const auto ids = fork ? g.in_arcs(v) : g.out_arcs(v);
    const bool keep_one = fork ? in_fork_[v] > 0 : out_merge_[v] > 0;
    bool kept = false;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        if (!live_[ids[i]])
            continue;
        bool drop;
        if (keep_one) {
            drop = kept || labels_[nbrs[i]] != same;
            if (!drop)
                kept = true;
        } else {
            drop = labels_[nbrs[i]] == other;
        }
        if (drop) {
            if (trace_) {
                const arc& e = g.arc_at(ids[i]);
                *trace_ << "RR2 " << v << " remove " << e.tail << ' ' << e.head << '\n';
            }
            remove_arc(ids[i]);
            ++rule_removals_;
        }
    }
    return true;
}

std::size_t solver_state::apply_set_label()
{
    std::size_t count = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (vertex_id v : graph_->topo_order())
            if (set_label_at(v)) {
                ++count;
                changed = true;
            }
    }
    return count;
}

std::size_t solver_state::apply_satisfy_label()
{
    const std::size_t before = removed_.size();
    for (bool changed = true; changed;) {
        changed = false;
        for (vertex_id v : graph_->topo_order())
            changed |= satisfy_label_at(v);
    }
    return removed_.size() - before;
}

void solver_state::reduce()
{
    while (!pending_.empty()) {
        const vertex_id v = pending_.back();
        pending_.pop_back();
        is_pending_[v] = false;
        set_label_at(v);
        satisfy_label_at(v);
    }
}

std::optional<vertex_id> solver_state::label_branch_vertex() const
{
    for (vertex_id v : graph_->topo_order()) {
        if (labels_[v] != label::unassigned)
            continue;
        if (unlabeled_in(v) == 0 || in_fork_[v] > 0 || unlabeled_out(v) == 0 || out_merge_[v] > 0)
            return v;
    }
    return std::nullopt;
}

bool solver_state::arc_branch_applies(vertex_id v) const
{
    return (labels_[v] == label::fork && live_in_[v] > 1) || (labels_[v] == label::merge && live_out_[v] > 1);
}

std::optional<vertex_id> solver_state::arc_branch_vertex() const
{
    for (vertex_id v : graph_->topo_order())
        if (arc_branch_applies(v))
            return v;
    return std::nullopt;
}

std::size_t solver_state::lower_bound() const
{
    const dag& g = *graph_;
    const std::size_t n = g.vertex_count();
    std::vector<bool> used(g.arc_count(), false);
    std::vector<std::size_t> avail_in(live_in_), avail_out(live_out_);
    std::vector<bool> dead(n, false);
    auto usable = [&](arc_id a) { return live_[a] && !used[a]; };
    auto use = [&](arc_id a) {
        used[a] = true;
        const arc& e = g.arc_at(a);
        --avail_out[e.tail];
        --avail_in[e.head];
    };
    auto use_two = [&](std::span<const arc_id> ids) {
        int taken = 0;
        for (std::size_t i = 0; i < ids.size() && taken < 2; ++i)
            if (usable(ids[i])) {
                use(ids[i]);
                ++taken;
            }
    };

    struct frame {
        vertex_id v;
        std::size_t next;
        arc_id via;
    };
    std::vector<frame> stack;
    std::size_t count = 0;
    for (vertex_id start : g.topo_order()) {
        while (avail_in[start] >= 2) {
            // DFS along unused live arcs for a vertex with two unused out-arcs.
            // Vertices that failed once never succeed later: arcs only get used.
            stack.clear();
            stack.push_back({start, 0, 0});
            bool found = false;
            while (!stack.empty()) {
                frame& f = stack.back();
                if (avail_out[f.v] >= 2) {
                    found = true;
                    break;
                }
                const auto out = g.out_neighbors(f.v);
                const auto ids = g.out_arcs(f.v);
                bool advanced = false;
                while (f.next < out.size()) {
                    const std::size_t i = f.next++;
                    if (usable(ids[i]) && !dead[out[i]]) {
                        stack.push_back({out[i], 0, ids[i]});
                        advanced = true;
                        break;
                    }
                }
                if (!advanced) {
                    dead[f.v] = true;
                    stack.pop_back();
                }
            }
            if (!found)
                break;
            use_two(g.in_arcs(start));
            for (std::size_t i = 1; i < stack.size(); ++i)
                use(stack[i].via);
            use_two(g.out_arcs(stack.back().v));
            ++count;
        }
    }
    return count;
}

bool solver_state::live_graph_is_funnel() const
{
    const dag& g = *graph_;
    std::vector<bool> tainted(g.vertex_count(), false);
    for (vertex_id v : g.topo_order()) {
        if (live_in_[v] > 1)
            tainted[v] = true;
        const auto in = g.in_neighbors(v);
        const auto ids = g.in_arcs(v);
        for (std::size_t i = 0; i < in.size() && !tainted[v]; ++i)
            if (live_[ids[i]] && tainted[in[i]])
                tainted[v] = true;
        if (tainted[v] && live_out_[v] > 1)
            return false;
    }
    return true;
}

dag solver_state::live_graph() const
{
    std::vector<arc> arcs;
    for (arc_id a = 0; a < graph_->arc_count(); ++a)
        if (live_[a])
            arcs.push_back(graph_->arc_at(a));
    return dag::from_arcs(graph_->vertex_count(), std::move(arcs));
}

std::vector<solver_state> branch_label(const solver_state& state, vertex_id v)
{
    const dag& g = state.graph();
    if (v >= g.vertex_count() || state.label_of(v) != label::unassigned)
        throw error(error_code::not_applicable, "label branch needs an unlabeled vertex");
    bool in_side = true, out_side = true;
    bool fork_in = false, merge_out = false;
    const auto in = g.in_neighbors(v);
    const auto in_ids = g.in_arcs(v);
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (!state.is_live(in_ids[i]))
            continue;
        in_side &= state.label_of(in[i]) != label::unassigned;
        fork_in |= state.label_of(in[i]) == label::fork;
    }
    const auto out = g.out_neighbors(v);
    const auto out_ids = g.out_arcs(v);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!state.is_live(out_ids[i]))
            continue;
        out_side &= state.label_of(out[i]) != label::unassigned;
        merge_out |= state.label_of(out[i]) == label::merge;
    }
    if (!(in_side || fork_in || out_side || merge_out))
        throw error(error_code::not_applicable, "label branch conditions do not hold");
    std::vector<solver_state> children(2, state);
    children[0].set_label(v, label::fork);
    children[1].set_label(v, label::merge);
    return children;
}

std::vector<solver_state> branch_arcs(const solver_state& state, vertex_id v)
{
    if (v >= state.graph().vertex_count() || !state.arc_branch_applies(v))
        throw error(error_code::not_applicable, "arc branch needs a Fork with In > 1 or a Merge with Out > 1");
    const dag& g = state.graph();
    const auto ids = state.label_of(v) == label::fork ? g.in_arcs(v) : g.out_arcs(v);
    std::vector<arc_id> live;
    for (arc_id a : ids)
        if (state.is_live(a))
            live.push_back(a);
    std::vector<solver_state> children;
    for (arc_id keep : live) {
        solver_state child = state;
        for (arc_id a : live)
            if (a != keep)
                child.remove_arc(a);
        children.push_back(std::move(child));
    }
    return children;
}

std::size_t lower_bound(const dag& g)
{
    return solver_state(g).lower_bound();
}

// Depth-first branch and bound over one solver_state, rolled back with undo.
class exact_search {
public:
    exact_search(const dag& g, const solver_options& options) : graph_(g), state_(g), options_(options)
    {
        state_.set_trace(options.trace);
        if (options.time_limit)
            deadline_ = std::chrono::steady_clock::now() + *options.time_limit;
    }

    // Looks for a solution smaller than `bound`. Returns true if one was found.
    bool run(std::size_t bound)
    {
        best_size_ = bound;
        found_ = false;
        if (options_.reduction_rules) {
            node(std::nullopt);
        } else {
            plain_labels_ = labeling(graph_.vertex_count(), label::fork);
            plain(0);
        }
        return found_;
    }

    bool timed_out() const { return timed_out_; }
    std::size_t best_size() const { return best_size_; }
    const arc_set& best_deletions() const { return best_deletions_; }
    const labeling& best_labels() const { return best_labels_; }
    solver_stats stats() const
    {
        solver_stats s = stats_;
        s.labels_set = state_.rule_labels_;
        s.arcs_satisfied = state_.rule_removals_;
        return s;
    }

private:
    bool out_of_time()
    {
        if (timed_out_)
            return true;
        if (deadline_ && std::chrono::steady_clock::now() >= *deadline_)
            timed_out_ = true;
        return timed_out_;
    }

    void trace_line(const std::string& line)
    {
        if (options_.trace)
            *options_.trace << line << '\n';
    }

    void node(std::optional<vertex_id> focus)
    {
        if (out_of_time())
            return;
        ++stats_.nodes;
        state_.reduce();

        const std::size_t removed = state_.removed_count();
        if (removed >= best_size_) {
            ++stats_.pruned;
            trace_line("prune " + std::to_string(removed));
            return;
        }
        const std::size_t bound = state_.lower_bound();
        if (removed + bound >= best_size_) {
            ++stats_.pruned;
            trace_line("prune " + std::to_string(removed) + " " + std::to_string(bound));
            return;
        }

        if (focus && state_.arc_branch_applies(*focus)) {
            arc_branch(*focus);
            return;
        }
        if (auto v = state_.label_branch_vertex()) {
            ++stats_.label_branches;
            for (label l : {label::fork, label::merge}) {
                trace_line("BR1 " + std::to_string(*v) + " " + label_char(l));
                const std::size_t mark = state_.mark();
                state_.set_label(*v, l);
                node(*v);
                state_.undo(mark);
                if (timed_out_)
                    return;
            }
            return;
        }
        if (auto v = state_.arc_branch_vertex()) {
            arc_branch(*v);
            return;
        }
        leaf();
    }

    void arc_branch(vertex_id v)
    {
        ++stats_.arc_branches;
        const bool fork = state_.label_of(v) == label::fork;
        const auto ids = fork ? graph_.in_arcs(v) : graph_.out_arcs(v);
        std::vector<arc_id> live;
        for (arc_id a : ids)
            if (state_.is_live(a))
                live.push_back(a);
        if (state_.removed_count() + live.size() - 1 >= best_size_) {
            ++stats_.pruned;
            trace_line("prune " + std::to_string(state_.removed_count() + live.size() - 1));
            return;
        }
        for (arc_id keep : live) {
            const arc& k = graph_.arc_at(keep);
            trace_line("BR2 " + std::to_string(v) + " keep " + std::to_string(k.tail) + " " + std::to_string(k.head));
            const std::size_t mark = state_.mark();
            for (arc_id a : live)
                if (a != keep)
                    state_.remove_arc(a);
            node(std::nullopt);
            state_.undo(mark);
            if (timed_out_)
                return;
        }
    }

    void leaf()
    {
        ++stats_.leaves;
        const labeling& labels = state_.labels();
        if (!labels.is_total() || !state_.live_graph_is_funnel())
            throw std::logic_error("search leaf is not a fully labeled funnel");
        const std::size_t size = state_.removed_count();
        trace_line("leaf " + std::to_string(size));
        if (size < best_size_) {
            best_size_ = size;
            best_deletions_ = state_.partial_solution();
            best_labels_ = labels;
            found_ = true;
        }
    }

    // Rules disabled: every labeling in topological order, completed by the
    // approximation's satisfy step.
    void plain(std::size_t index)
    {
        if (out_of_time())
            return;
        ++stats_.nodes;
        const auto order = graph_.topo_order();
        if (index == order.size()) {
            ++stats_.leaves;
            const std::size_t size = arc_deletion_count(graph_, plain_labels_);
            if (size < best_size_) {
                best_size_ = size;
                best_deletions_ = arc_deletion_set(graph_, plain_labels_);
                best_labels_ = plain_labels_;
                found_ = true;
            }
            return;
        }
        ++stats_.label_branches;
        for (label l : {label::fork, label::merge}) {
            plain_labels_[order[index]] = l;
            plain(index + 1);
        }
    }

    const dag& graph_;
    solver_state state_;
    const solver_options& options_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    bool timed_out_ = false;
    bool found_ = false;
    std::size_t best_size_ = 0;
    arc_set best_deletions_;
    labeling best_labels_;
    labeling plain_labels_;
    solver_stats stats_;
};

exact_result solve_addf(const dag& g, const solver_options& options)
{
    const approx_result seed = approximate_addf(g);

    exact_result result;
    result.root_lower_bound = lower_bound(g);
    result.distance = seed.size;
    result.deletion_set = seed.deletion_set;
    result.labels = seed.labels;

    exact_search search(g, options);
    std::size_t bound = seed.size;
    if (options.initial_upper_bound && *options.initial_upper_bound + 1 < bound)
        bound = *options.initial_upper_bound + 1;
    bool found = search.run(bound);
    if (!found && bound < seed.size && !search.timed_out())
        found = search.run(seed.size);
    if (found) {
        result.distance = search.best_size();
        result.deletion_set = search.best_deletions();
        result.labels = search.best_labels();
    }
    result.stats = search.stats();
    result.optimal = !search.timed_out();
    return result;
}

namespace {

// Funnel test on g restricted to arcs with keep[a] set.
bool masked_is_funnel(const dag& g, const std::vector<bool>& keep)
{
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> in(n, 0), out(n, 0);
    for (arc_id a = 0; a < g.arc_count(); ++a)
        if (keep[a]) {
            ++out[g.arc_at(a).tail];
            ++in[g.arc_at(a).head];
        }
    std::vector<bool> tainted(n, false);
    for (vertex_id v : g.topo_order()) {
        if (in[v] > 1)
            tainted[v] = true;
        const auto srcs = g.in_neighbors(v);
        const auto ids = g.in_arcs(v);
        for (std::size_t i = 0; i < srcs.size() && !tainted[v]; ++i)
            if (keep[ids[i]] && tainted[srcs[i]])
                tainted[v] = true;
        if (tainted[v] && out[v] > 1)
            return false;
    }
    return true;
}

}  // namespace

exact_result brute_force_addf(const dag& g, std::size_t max_arcs)
{
    const std::size_t m = g.arc_count();
    if (m > max_arcs)
        throw error(error_code::too_large, std::to_string(m) + " arcs exceed the enumeration cap of " +
                                               std::to_string(max_arcs));
    std::vector<bool> keep(m, true);
    std::vector<std::size_t> chosen;
    for (std::size_t k = 0; k <= m; ++k) {
        // Combinations of k arc ids in lexicographic order.
        chosen.resize(k);
        std::iota(chosen.begin(), chosen.end(), std::size_t{0});
        while (true) {
            std::fill(keep.begin(), keep.end(), true);
            for (std::size_t a : chosen)
                keep[a] = false;
            if (masked_is_funnel(g, keep)) {
                exact_result result;
                result.distance = k;
                std::vector<arc> arcs;
                for (std::size_t a : chosen)
                    arcs.push_back(g.arc_at(static_cast<arc_id>(a)));
                result.deletion_set = arc_set(std::move(arcs));
                result.labels = funnel_labeling(delete_arcs(g, result.deletion_set));
                result.root_lower_bound = lower_bound(g);
                return result;
            }
            std::size_t i = k;
            while (i > 0 && chosen[i - 1] == m - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++chosen[i - 1];
            for (std::size_t j = i; j < k; ++j)
                chosen[j] = chosen[j - 1] + 1;
        }
    }
    throw std::logic_error("deleting every arc always yields a funnel");
}

}  // namespace funnel
