#include "mortonrrt/collision.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace mrrt {

std::string_view to_string(CollisionState s)
{
    switch (s) {
    case CollisionState::NoCollision:
        return "NO_COLLISION";
    case CollisionState::Collision:
        return "COLLISION";
    case CollisionState::Miss:
        return "MISS";
    }
    return "?";
}

namespace {

// Bounds are checked by the callers; t in [0, T] here.
bool hits_any(const SpaceTimePoint& p, const Scenario& s, CollisionCounter* counter)
{
    const double f = p.t / static_cast<double>(s.timesteps);
    for (const auto& o : s.obstacles) {
        if (counter) {
            ++counter->obstacle_tests;
        }
        const double ox = o.start_pos.x + f * (o.end_pos.x - o.start_pos.x);
        const double oy = o.start_pos.y + f * (o.end_pos.y - o.start_pos.y);
        const double dx = p.x - ox;
        const double dy = p.y - oy;
        if (dx * dx + dy * dy <= o.radius * o.radius) {
            return true;
        }
    }
    return false;
}

} // namespace

CollisionState point_collides(const SpaceTimePoint& p, const Scenario& s, CollisionCounter* counter)
{
    if (!s.contains(p)) {
        throw std::domain_error("point_collides: point outside the scenario volume");
    }
    return hits_any(p, s, counter) ? CollisionState::Collision : CollisionState::NoCollision;
}

std::uint64_t segment_subdivisions(double length, double h)
{
    if (!(h > 0.0)) {
        throw std::domain_error("segment_subdivisions: h must be > 0");
    }
    const double ratio = std::ceil(length / h);
    if (!(ratio > 1.0)) {
        return 1;
    }
    if (ratio >= 0x1.0p62) {
        throw std::domain_error("segment_subdivisions: segment too long for spacing");
    }
    return std::bit_ceil(static_cast<std::uint64_t>(ratio));
}

CollisionState segment_collides(const SpaceTimePoint& a, const SpaceTimePoint& b, const Scenario& s,
                                double h, const DistMetric& metric, CollisionCounter* counter)
{
    if (!(a.t < b.t)) {
        throw std::domain_error("segment_collides: requires a.t < b.t");
    }
    if (!s.contains(a) || !s.contains(b)) {
        throw std::domain_error("segment_collides: endpoint outside the scenario volume");
    }
    const std::uint64_t n = segment_subdivisions(metric(a, b), h);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::uint64_t i = 0; i <= n; ++i) {
        SpaceTimePoint p;
        if (i == n) {
            p = b;
        } else {
            const double f = static_cast<double>(i) * inv;
            p = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.t + f * (b.t - a.t)};
        }
        if (hits_any(p, s, counter)) {
            return CollisionState::Collision;
        }
    }
    return CollisionState::NoCollision;
}

std::ptrdiff_t first_colliding_edge(std::span<const SpaceTimePoint> path, const Scenario& s, double h,
                                    const DistMetric& metric, CollisionCounter* counter)
{
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (segment_collides(path[i], path[i + 1], s, h, metric, counter) != CollisionState::NoCollision) {
            return static_cast<std::ptrdiff_t>(i);
        }
    }
    return -1;
}

bool validate_path(std::span<const SpaceTimePoint> path, const Scenario& s, double h,
                   const DistMetric& metric)
{
    if (path.empty()) {
        return false;
    }
    const auto& first = path.front();
    if (first.x != s.start.x || first.y != s.start.y || !s.contains(first)) {
        return false;
    }
    for (const auto& p : path) {
        if (!s.contains(p)) {
            return false;
        }
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!(path[i].t < path[i + 1].t)) {
            return false;
        }
    }
    if (path.size() == 1 && point_collides(first, s) != CollisionState::NoCollision) {
        return false;
    }
    if (first_colliding_edge(path, s, h, metric) >= 0) {
        return false;
    }
    const auto& last = path.back();
    return std::hypot(last.x - s.goal.x, last.y - s.goal.y) <= s.goal_radius;
}

double path_length(std::span<const SpaceTimePoint> path)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        total += std::hypot(path[i + 1].x - path[i].x, path[i + 1].y - path[i].y);
    }
    return total;
}

} // namespace mrrt
