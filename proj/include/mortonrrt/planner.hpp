#pragma once

#include "mortonrrt/collision.hpp"
#include "mortonrrt/cost_model.hpp"
#include "mortonrrt/memostore.hpp"
#include "mortonrrt/random.hpp"
#include "mortonrrt/scenario.hpp"
#include "mortonrrt/spatial.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace mrrt {

enum class Variant : std::uint8_t
{
    Baseline,
    SwMorton,
    HwMorton,
};

std::string_view to_string(Variant v);
/// Accepts "baseline", "sw-morton", "hw-morton"; throws std::invalid_argument.
Variant parse_variant(std::string_view name);

inline bool uses_store(Variant v) { return v != Variant::Baseline; }
inline StoreBackend backend_of(Variant v)
{
    return v == Variant::HwMorton ? StoreBackend::Hardware : StoreBackend::Software;
}

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct PlannerConfig
{
    Variant variant = Variant::Baseline;
    double step = 1.0;
    double time_weight = 1.0;
    double collision_step = kDefaultCollisionStep;  ///< h
    std::uint64_t max_iters = 1'000'000;
    std::uint64_t seed = 0;
    StoreConfig store;
    double goal_bias = 0.05;

    /// Throws ConfigError.
    void validate(const Scenario& s) const;
};

struct PlanStats
{
    std::uint64_t nodes = 0;          ///< N
    std::uint64_t obstacle_count = 0; ///< L
    std::uint64_t iterations = 0;
    std::uint64_t extend_attempts = 0;  ///< iterations that reached the memo collision lookup
    std::uint64_t exact_nn = 0;
    std::uint64_t exact_collision = 0;
    std::uint64_t nn_store_hits = 0;
    std::uint64_t col_store_hits = 0;
    std::uint64_t revalidation_failures = 0;
    double alpha = 1.0;  ///< fraction of extensions resolved by exact collision detection
    double beta = 1.0;   ///< fraction of iterations resolved by exact NN search
    OpCounts counts;
    StoreBackend backend = StoreBackend::Software;
    double wall_time_ms = 0.0;
    double modeled_ops = 0.0;
    double modeled_cycles = 0.0;
    double modeled_store_ops = 0.0;
    double path_len = 0.0;
};

struct PlanResult
{
    std::optional<std::vector<SpaceTimePoint>> path;  ///< nullopt when unreachable
    PlanStats stats;

    bool success() const { return path.has_value(); }
};

/// With probability goal_bias: (goal.x, goal.y, t ~ U[0,T]); otherwise uniform
/// over [0,l]^2 x [0,T]. Always consumes exactly four draws.
SpaceTimePoint sample(Rng& rng, const Scenario& s, double goal_bias);

/// Moves from `from` toward `toward` by at most `step` under `metric`, clamped
/// to the scenario volume. Throws std::domain_error unless toward.t > from.t.
SpaceTimePoint steer(const SpaceTimePoint& from, const SpaceTimePoint& toward, double step,
                     const DistMetric& metric, const Scenario& bounds);

struct TreeNode
{
    SpaceTimePoint point;
    std::uint32_t parent = 0xffffffffu;
    bool exact_edge = true;  ///< edge to parent was checked exactly when added
    bool blocked = false;    ///< a colliding edge lies on the root path
};

/// Root-to-node point sequence following parent links.
std::vector<SpaceTimePoint> extract_path(std::span<const TreeNode> tree, NodeRef goal_node);

/// Space-time RRT with optional Morton-store memoization of nearest-neighbour
/// and collision queries.
PlanResult plan(const Scenario& s, const PlannerConfig& cfg, const CostModel& cost = {});

} // namespace mrrt
