#include "mortonrrt/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace mrrt {

std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::Baseline:
        return "baseline";
    case Variant::SwMorton:
        return "sw-morton";
    case Variant::HwMorton:
        return "hw-morton";
    }
    return "?";
}

Variant parse_variant(std::string_view name)
{
    if (name == "baseline") {
        return Variant::Baseline;
    }
    if (name == "sw-morton") {
        return Variant::SwMorton;
    }
    if (name == "hw-morton") {
        return Variant::HwMorton;
    }
    throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

void PlannerConfig::validate(const Scenario& s) const
{
    if (!(step > 0.0)) {
        throw ConfigError("step must be > 0");
    }
    if (!(goal_bias >= 0.0 && goal_bias < 1.0)) {
        throw ConfigError("goal_bias must be in [0, 1)");
    }
    if (!(time_weight > 0.0)) {
        throw ConfigError("time weight must be > 0");
    }
    if (!(collision_step > 0.0)) {
        throw ConfigError("collision step must be > 0");
    }
    try {
        s.validate();
        store.validate();
        store.quant.validate(s.edge_length, s.timesteps);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

SpaceTimePoint sample(Rng& rng, const Scenario& s, double goal_bias)
{
    const double u = rng.uniform01();
    const double x = rng.uniform(0.0, s.edge_length);
    const double y = rng.uniform(0.0, s.edge_length);
    const double t = rng.uniform(0.0, static_cast<double>(s.timesteps));
    if (u < goal_bias) {
        return {s.goal.x, s.goal.y, t};
    }
    return {x, y, t};
}

SpaceTimePoint steer(const SpaceTimePoint& from, const SpaceTimePoint& toward, double step,
                     const DistMetric& metric, const Scenario& bounds)
{
    if (!(toward.t > from.t)) {
        throw std::domain_error("steer: target must be later than the origin");
    }
    const double d = metric(from, toward);
    SpaceTimePoint out = toward;
    if (d > step) {
        const double f = step / d;
        out = {from.x + f * (toward.x - from.x), from.y + f * (toward.y - from.y),
               from.t + f * (toward.t - from.t)};
    }
    const double l = bounds.edge_length;
    out.x = std::clamp(out.x, 0.0, l);
    out.y = std::clamp(out.y, 0.0, l);
    out.t = std::clamp(out.t, 0.0, static_cast<double>(bounds.timesteps));
    if (!(out.t > from.t)) {
        // Rounding swallowed a tiny time advance.
        out.t = std::nextafter(from.t, toward.t);
    }
    return out;
}

std::vector<SpaceTimePoint> extract_path(std::span<const TreeNode> tree, NodeRef goal_node)
{
    std::vector<SpaceTimePoint> path;
    for (std::uint32_t id = goal_node.id; id != 0xffffffffu; id = tree[id].parent) {
        path.push_back(tree[id].point);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {
using Clock = std::chrono::steady_clock;

bool in_goal(const SpaceTimePoint& p, const Scenario& s)
{
    return std::hypot(p.x - s.goal.x, p.y - s.goal.y) <= s.goal_radius;
}

class Planner
{
public:
    Planner(const Scenario& s, const PlannerConfig& cfg, const CostModel& cost)
        : s_(s)
        , cfg_(cfg)
        , cost_(cost)
        , metric_{cfg.time_weight}
        , rng_(cfg.seed)
        , memo_(uses_store(cfg.variant))
        , store_(store_config(cfg))
    {
    }

    PlanResult run()
    {
        const auto t0 = Clock::now();
        PlanResult result;
        result.path = search();
        if (result.path) {
            stats_.path_len = path_length(*result.path);
        }
        finish_stats(Clock::now() - t0);
        result.stats = stats_;
        return result;
    }

private:
    static StoreConfig store_config(const PlannerConfig& cfg)
    {
        StoreConfig sc = cfg.store;
        sc.backend = backend_of(cfg.variant);
        return sc;
    }

    NodeRef add_node(const SpaceTimePoint& p, std::uint32_t parent, bool exact_edge)
    {
        const NodeRef ref{static_cast<std::uint32_t>(tree_.size())};
        TreeNode node;
        node.point = p;
        node.parent = parent;
        node.exact_edge = exact_edge;
        node.blocked = parent != 0xffffffffu && tree_[parent].blocked;
        tree_.push_back(node);
        index_.insert(p, ref);
        return ref;
    }

    std::vector<std::uint32_t> chain_to(std::uint32_t id) const
    {
        std::vector<std::uint32_t> chain;
        for (; id != 0xffffffffu; id = tree_[id].parent) {
            chain.push_back(id);
        }
        std::reverse(chain.begin(), chain.end());
        return chain;
    }

    /// Blocked nodes stay in the tree but are never extended again.
    void block(std::uint32_t id)
    {
        tree_[id].blocked = true;
        index_.set_enabled(NodeRef{id}, false);
    }

    /// Exact re-check of every edge on the candidate's root path. On failure
    /// the child of the first colliding edge and its subtree lose goal
    /// candidacy and the store learns the collision.
    bool confirm(std::uint32_t goal_id)
    {
        const auto chain = chain_to(goal_id);
        std::vector<SpaceTimePoint> path;
        path.reserve(chain.size());
        for (auto id : chain) {
            path.push_back(tree_[id].point);
        }
        const auto bad = first_colliding_edge(path, s_, cfg_.collision_step, metric_, &collisions_);
        if (bad < 0) {
            return true;
        }
        ++stats_.revalidation_failures;
        const std::uint32_t child = chain[static_cast<std::size_t>(bad) + 1];
        block(child);
        for (std::size_t id = child + 1; id < tree_.size(); ++id) {
            if (!tree_[id].blocked && tree_[tree_[id].parent].blocked) {
                block(static_cast<std::uint32_t>(id));
            }
        }
        if (memo_) {
            store_.morton_update(tree_[child].point, CollisionState::Collision, kNoNode);
        }
        return false;
    }

    std::optional<std::vector<SpaceTimePoint>> search()
    {
        const SpaceTimePoint root{s_.start.x, s_.start.y, 0.0};
        if (point_collides(root, s_, &collisions_) != CollisionState::NoCollision) {
            return std::nullopt;
        }
        tree_.reserve(1 << 14);
        index_.reserve(1 << 14);
        add_node(root, 0xffffffffu, true);
        if (in_goal(root, s_)) {
            return std::vector<SpaceTimePoint>{root};
        }

        while (stats_.iterations < cfg_.max_iters) {
            ++stats_.iterations;
            ++counts_[OpKind::Sample];
            const SpaceTimePoint x_rand = sample(rng_, s_, cfg_.goal_bias);

            std::optional<NodeRef> nearest;
            if (memo_) {
                nearest = store_.morton_nn(x_rand);
                if (nearest && tree_[nearest->id].blocked) {
                    nearest.reset();
                }
                if (nearest) {
                    ++stats_.nn_store_hits;
                }
            }
            if (!nearest) {
                ++stats_.exact_nn;
                nearest = index_.nearest_before(x_rand, metric_);
                counts_[OpKind::NnNodeVisit] += index_.last_visits();
            }
            if (!nearest) {
                continue;
            }

            const SpaceTimePoint& from = tree_[nearest->id].point;
            ++counts_[OpKind::Steer];
            const SpaceTimePoint x_new = steer(from, x_rand, cfg_.step, metric_, s_);

            ++stats_.extend_attempts;
            CollisionState state = CollisionState::Miss;
            if (memo_) {
                state = store_.morton_col(x_new);
                if (state == CollisionState::NoCollision) {
                    ++stats_.col_store_hits;
                }
            }
            bool exact = false;
            if (state != CollisionState::NoCollision) {
                ++stats_.exact_collision;
                exact = true;
                state = segment_collides(from, x_new, s_, cfg_.collision_step, metric_, &collisions_);
            }

            const NodeRef new_ref{static_cast<std::uint32_t>(tree_.size())};
            if (memo_) {
                store_.morton_update(x_new, state, state == CollisionState::NoCollision ? new_ref : kNoNode);
            }
            // The resolved state decides insertion; no second exact check.
            if (state != CollisionState::NoCollision) {
                continue;
            }
            add_node(x_new, nearest->id, exact);
            if (in_goal(x_new, s_) && !tree_[new_ref.id].blocked && confirm(new_ref.id)) {
                return extract_path(tree_, new_ref);
            }
        }
        return std::nullopt;
    }

    void finish_stats(Clock::duration elapsed)
    {
        stats_.nodes = tree_.size();
        stats_.obstacle_count = s_.obstacles.size();
        stats_.alpha = stats_.extend_attempts == 0
                           ? 1.0
                           : static_cast<double>(stats_.exact_collision) /
                                 static_cast<double>(stats_.extend_attempts);
        stats_.beta = stats_.iterations == 0 ? 1.0
                                             : static_cast<double>(stats_.exact_nn) /
                                                   static_cast<double>(stats_.iterations);
        counts_[OpKind::ObstacleTest] = collisions_.obstacle_tests;
        counts_ += store_.op_counts();
        stats_.counts = counts_;
        stats_.backend = store_.config().backend;
        stats_.modeled_ops = cost_.ops(counts_, stats_.backend);
        stats_.modeled_cycles = cost_.cycles(counts_, stats_.backend);
        stats_.modeled_store_ops = cost_.store_ops(counts_, stats_.backend);
        stats_.wall_time_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    }

    const Scenario& s_;
    const PlannerConfig& cfg_;
    const CostModel& cost_;
    DistMetric metric_;
    Rng rng_;
    bool memo_;
    MortonStore store_;
    std::vector<TreeNode> tree_;
    KdIndex index_;
    CollisionCounter collisions_;
    OpCounts counts_;
    PlanStats stats_;
};

} // namespace

PlanResult plan(const Scenario& s, const PlannerConfig& cfg, const CostModel& cost)
{
    cfg.validate(s);
    cost.validate();
    return Planner(s, cfg, cost).run();
}

} // namespace mrrt
