#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrrt {

inline constexpr double kDefaultObstacleRadius = 3.0;
inline constexpr double kDefaultGoalRadius = 2.0;

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// A coordinate in the planning volume: map position plus continuous time.
struct SpaceTimePoint
{
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    friend bool operator==(const SpaceTimePoint&, const SpaceTimePoint&) = default;
};

/// A disc obstacle moving on a straight line from start_pos (t = 0) to end_pos (t = T).
struct ObstacleTrack
{
    Vec2 start_pos;
    Vec2 end_pos;
    double radius = kDefaultObstacleRadius;

    friend bool operator==(const ObstacleTrack&, const ObstacleTrack&) = default;
};

struct Scenario
{
    double edge_length = 100.0;
    int timesteps = 20;
    std::vector<ObstacleTrack> obstacles;
    Vec2 start;
    Vec2 goal;
    double goal_radius = kDefaultGoalRadius;

    std::size_t obstacle_count() const { return obstacles.size(); }

    bool contains(const SpaceTimePoint& p) const
    {
        return p.x >= 0.0 && p.x <= edge_length && p.y >= 0.0 && p.y <= edge_length &&
               p.t >= 0.0 && p.t <= static_cast<double>(timesteps);
    }

    /// Throws ScenarioError naming the first field that breaks an invariant.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Raised for malformed scenario documents and invariant violations; the
/// message starts with the offending field name.
class ScenarioError : public std::runtime_error
{
public:
    ScenarioError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what)
        , field_(std::move(field))
    {
    }

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Linear interpolation between the track endpoints; t may be fractional.
/// Throws std::domain_error if t lies outside [0, T].
Vec2 obstacle_position_at(const ObstacleTrack& track, double t, int timesteps);

/// Synthetic test case: start (0,0), goal (l,l), obstacle endpoints uniform
/// on [0,l]^2. Tracks that would sit on the start at t = 0 or on the goal
/// region at t = T are redrawn. Pure function of its arguments.
Scenario generate_synthetic(double edge_length, int timesteps, int n_obstacles, std::uint64_t seed,
                            double obstacle_radius = kDefaultObstacleRadius);

void save_scenario(const Scenario& s, std::ostream& out);
Scenario load_scenario(std::istream& in);

void save_scenario_file(const Scenario& s, const std::filesystem::path& path);
Scenario load_scenario_file(const std::filesystem::path& path);

std::string to_string(const Scenario& s);

} // namespace mrrt
