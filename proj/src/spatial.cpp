#include "mortonrrt/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace mrrt {

double DistMetric::operator()(const SpaceTimePoint& a, const SpaceTimePoint& b) const
{
    return std::sqrt(squared(a, b));
}

void KdIndex::insert(const SpaceTimePoint& p, NodeRef r)
{
    Node fresh;
    fresh.point = p;
    fresh.ref = r;
    fresh.lo = {p.x, p.y, p.t};
    fresh.hi = fresh.lo;

    const auto new_index = static_cast<std::uint32_t>(nodes_.size());
    if (slot_of_.size() <= r.id) {
        slot_of_.resize(r.id + 1, kNone);
    }
    slot_of_[r.id] = new_index;
    if (nodes_.empty()) {
        nodes_.push_back(fresh);
        return;
    }

    std::uint32_t cur = 0;
    for (;;) {
        Node& n = nodes_[cur];
        for (int a = 0; a < 3; ++a) {
            const double c = coord(p, a);
            n.lo[a] = std::min(n.lo[a], c);
            n.hi[a] = std::max(n.hi[a], c);
        }
        const int side = coord(p, n.axis) >= coord(n.point, n.axis) ? 1 : 0;
        if (n.child[side] == kNone) {
            n.child[side] = new_index;
            fresh.axis = static_cast<std::uint8_t>((n.axis + 1) % 3);
            break;
        }
        cur = n.child[side];
    }
    nodes_.push_back(fresh);
}

void KdIndex::set_enabled(NodeRef r, bool enabled)
{
    nodes_.at(slot_of_.at(r.id)).enabled = enabled;
}

double KdIndex::box_lower_bound(const Node& n, const SpaceTimePoint& q, const DistMetric& metric) const
{
    auto gap = [](double v, double lo, double hi) {
        if (v < lo) {
            return lo - v;
        }
        if (v > hi) {
            return v - hi;
        }
        return 0.0;
    };
    const double dx = gap(q.x, n.lo[0], n.hi[0]);
    const double dy = gap(q.y, n.lo[1], n.hi[1]);
    const double dt = gap(q.t, n.lo[2], n.hi[2]);
    return dx * dx + dy * dy + metric.time_weight * dt * dt;
}

std::optional<NodeRef> KdIndex::nearest_before(const SpaceTimePoint& q, const DistMetric& metric) const
{
    last_visits_ = 0;
    if (nodes_.empty()) {
        return std::nullopt;
    }

    std::optional<NodeRef> best;
    double best_d2 = INFINITY;

    stack_.clear();
    stack_.push_back(0);
    while (!stack_.empty()) {
        const Node& n = nodes_[stack_.back()];
        stack_.pop_back();

        if (n.lo[2] >= q.t) {
            continue;
        }
        // Equal bound may still hide an equidistant point with a smaller id.
        if (box_lower_bound(n, q, metric) > best_d2) {
            continue;
        }

        ++last_visits_;
        if (n.enabled && n.point.t < q.t) {
            const double d2 = metric.squared(n.point, q);
            if (d2 < best_d2 || (d2 == best_d2 && n.ref < *best)) {
                best_d2 = d2;
                best = n.ref;
            }
        }

        const int near_side = coord(q, n.axis) >= coord(n.point, n.axis) ? 1 : 0;
        const std::uint32_t near_child = n.child[near_side];
        const std::uint32_t far_child = n.child[1 - near_side];
        if (far_child != kNone) {
            stack_.push_back(far_child);
        }
        if (near_child != kNone) {
            stack_.push_back(near_child);
        }
    }

    visits_ += last_visits_;
    return best;
}

std::vector<IndexedPoint> KdIndex::points() const
{
    std::vector<IndexedPoint> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) {
        out.push_back({n.point, n.ref, n.enabled});
    }
    return out;
}

std::optional<NodeRef> nearest_before_linear(std::span<const IndexedPoint> points,
                                             const SpaceTimePoint& q, const DistMetric& metric)
{
    std::optional<NodeRef> best;
    double best_d2 = INFINITY;
    for (const auto& ip : points) {
        if (!ip.enabled || !(ip.point.t < q.t)) {
            continue;
        }
        const double d2 = metric.squared(ip.point, q);
        if (d2 < best_d2 || (d2 == best_d2 && ip.ref < *best)) {
            best_d2 = d2;
            best = ip.ref;
        }
    }
    return best;
}

} // namespace mrrt
