#pragma once

#include "mortonrrt/scenario.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mrrt {

/// Dense handle into the planner's node arena.
struct NodeRef
{
    std::uint32_t id = 0;

    friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

/// sqrt(dx^2 + dy^2 + w_t * dt^2)
struct DistMetric
{
    double time_weight = 1.0;

    double squared(const SpaceTimePoint& a, const SpaceTimePoint& b) const
    {
        const double dx = a.x - b.x;
        const double dy = a.y - b.y;
        const double dt = a.t - b.t;
        return dx * dx + dy * dy + time_weight * dt * dt;
    }

    double operator()(const SpaceTimePoint& a, const SpaceTimePoint& b) const;
};

struct IndexedPoint
{
    SpaceTimePoint point;
    NodeRef ref;
    bool enabled = true;
};

/// Append-only 3-d tree over (x, y, t) answering exact nearest-neighbour
/// queries restricted to points strictly earlier than the query. Points can be
/// disabled, which hides them from queries without restructuring the tree.
///
/// Every tree node keeps the bounding box of its subtree. A subtree is pruned
/// when its earliest time is >= q.t or when its box is farther than the best
/// candidate so far. Ties on distance go to the smaller NodeRef.
class KdIndex
{
public:
    /// NodeRef ids index an internal table, so they should be dense.
    void insert(const SpaceTimePoint& p, NodeRef r);

    /// Hides (or restores) the point inserted under r.
    void set_enabled(NodeRef r, bool enabled);
    bool enabled(NodeRef r) const { return nodes_[slot_of_[r.id]].enabled; }

    std::optional<NodeRef> nearest_before(const SpaceTimePoint& q, const DistMetric& metric) const;

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }

    /// Tree nodes examined by all queries so far.
    std::uint64_t visit_count() const { return visits_; }
    /// Tree nodes examined by the most recent query.
    std::uint64_t last_visits() const { return last_visits_; }

    std::vector<IndexedPoint> points() const;

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;

    struct Node
    {
        SpaceTimePoint point;
        NodeRef ref;
        std::uint32_t child[2] = {kNone, kNone};
        std::uint8_t axis = 0;
        bool enabled = true;
        std::array<double, 3> lo;
        std::array<double, 3> hi;
    };

    static double coord(const SpaceTimePoint& p, int axis)
    {
        return axis == 0 ? p.x : (axis == 1 ? p.y : p.t);
    }

    double box_lower_bound(const Node& n, const SpaceTimePoint& q, const DistMetric& metric) const;

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> slot_of_;
    mutable std::vector<std::uint32_t> stack_;
    mutable std::uint64_t visits_ = 0;
    mutable std::uint64_t last_visits_ = 0;
};

/// Exhaustive-scan reference with the same contract as KdIndex::nearest_before.
std::optional<NodeRef> nearest_before_linear(std::span<const IndexedPoint> points,
                                             const SpaceTimePoint& q, const DistMetric& metric);

} // namespace mrrt
