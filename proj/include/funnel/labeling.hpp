#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "funnel/dag.hpp"

namespace funnel {

enum class label : std::uint8_t { unassigned, fork, merge };

constexpr label flipped(label l)
{
    return l == label::fork ? label::merge : l == label::merge ? label::fork : label::unassigned;
}

// Per-vertex Fork/Merge assignment; `unassigned` is the undecided state used
// by the exact solver.
class labeling {
public:
    labeling() = default;
    explicit labeling(std::size_t vertex_count, label initial = label::unassigned)
        : labels_(vertex_count, initial)
    {
    }
    explicit labeling(std::vector<label> labels) : labels_(std::move(labels)) {}

    std::size_t size() const noexcept { return labels_.size(); }
    label operator[](vertex_id v) const { return labels_[v]; }
    label& operator[](vertex_id v) { return labels_[v]; }

    bool is_total() const
    {
        return std::none_of(labels_.begin(), labels_.end(),
                            [](label l) { return l == label::unassigned; });
    }

    const std::vector<label>& values() const noexcept { return labels_; }

    friend bool operator==(const labeling&, const labeling&) = default;

private:
    std::vector<label> labels_;
};

}  // namespace funnel
