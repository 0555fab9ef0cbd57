#pragma once

#include "mortonrrt/scenario.hpp"
#include "mortonrrt/spatial.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace mrrt {

inline constexpr double kDefaultCollisionStep = 0.25;

/// Miss is only ever produced by memo-store lookups.
enum class CollisionState : std::uint8_t
{
    NoCollision = 0,
    Collision = 1,
    Miss = 2,
};

std::string_view to_string(CollisionState s);

/// Tally of (sample point, obstacle) distance tests, the unit the cost model
/// charges exact collision work in.
struct CollisionCounter
{
    std::uint64_t obstacle_tests = 0;
};

/// Throws std::domain_error if p is outside the scenario volume.
CollisionState point_collides(const SpaceTimePoint& p, const Scenario& s,
                              CollisionCounter* counter = nullptr);

/// Number of equal sub-intervals used to sample a segment of metric length
/// `length` at spacing `h`: the smallest power of two with length / n <= h.
/// Powers of two make the sample set of any finer spacing a superset of a
/// coarser one.
std::uint64_t segment_subdivisions(double length, double h);

/// Samples a -> b (endpoints included) at spacing <= h under `metric`.
/// Throws std::domain_error unless a.t < b.t, or if h <= 0.
CollisionState segment_collides(const SpaceTimePoint& a, const SpaceTimePoint& b, const Scenario& s,
                                double h = kDefaultCollisionStep, const DistMetric& metric = {},
                                CollisionCounter* counter = nullptr);

/// Index of the first edge (i -> i+1) whose segment collides, or -1.
std::ptrdiff_t first_colliding_edge(std::span<const SpaceTimePoint> path, const Scenario& s,
                                    double h = kDefaultCollisionStep, const DistMetric& metric = {},
                                    CollisionCounter* counter = nullptr);

/// True iff the path starts at s.start, t strictly increases, no segment
/// collides and the last point is within goal_radius of s.goal.
bool validate_path(std::span<const SpaceTimePoint> path, const Scenario& s,
                   double h = kDefaultCollisionStep, const DistMetric& metric = {});

/// Sum of 2D (x, y) segment lengths.
double path_length(std::span<const SpaceTimePoint> path);

} // namespace mrrt
