#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mortonrrt/collision.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace mrrt;

namespace {

Scenario one_obstacle(Vec2 from, Vec2 to, double r, int T = 20, double l = 20)
{
    Scenario s;
    s.edge_length = l;
    s.timesteps = T;
    s.goal = {l, l};
    s.obstacles.push_back({from, to, r});
    return s;
}

// Smallest (distance - radius) over uniformly spaced samples at spacing <= h.
double dense_clearance(const SpaceTimePoint& a, const SpaceTimePoint& b, const Scenario& s, double h)
{
    const double len = std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) + (b.t - a.t) * (b.t - a.t));
    const long n = std::max(1L, static_cast<long>(std::ceil(len / h)));
    double best = INFINITY;
    for (long i = 0; i <= n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n);
        const double x = a.x + f * (b.x - a.x);
        const double y = a.y + f * (b.y - a.y);
        const double t = a.t + f * (b.t - a.t);
        for (const auto& o : s.obstacles) {
            const double g = t / s.timesteps;
            const double ox = o.start_pos.x + g * (o.end_pos.x - o.start_pos.x);
            const double oy = o.start_pos.y + g * (o.end_pos.y - o.start_pos.y);
            best = std::min(best, std::hypot(x - ox, y - oy) - o.radius);
        }
    }
    return best;
}

double max_speed(const Scenario& s)
{
    double v = 0.0;
    for (const auto& o : s.obstacles) {
        v = std::max(v, std::hypot(o.end_pos.x - o.start_pos.x, o.end_pos.y - o.start_pos.y) / s.timesteps);
    }
    return v;
}

} // namespace

TEST_CASE("point checks")
{
    const Scenario s = one_obstacle({0, 0}, {10, 10}, 2.0);
    CHECK(point_collides({5, 6, 10}, s) == CollisionState::Collision);
    CHECK(point_collides({5, 8, 10}, s) == CollisionState::NoCollision);
    CHECK(point_collides({5, 7, 10}, s) == CollisionState::Collision);  // boundary counts
    CHECK_THROWS_AS(point_collides({21, 0, 0}, s), std::domain_error);
    CHECK_THROWS_AS(point_collides({0, 0, 21}, s), std::domain_error);

    Scenario empty;
    empty.goal = {100, 100};
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        CHECK(point_collides({u(gen) * 100, u(gen) * 100, u(gen) * 20}, empty) == CollisionState::NoCollision);
    }

    CollisionCounter c;
    Scenario two = one_obstacle({15, 15}, {15, 15}, 1.0);
    two.obstacles.push_back({{2, 2}, {2, 2}, 1.0});
    point_collides({2, 2, 1}, two, &c);
    CHECK(c.obstacle_tests == 2);
    point_collides({15, 15, 1}, two, &c);  // early exit on the first obstacle
    CHECK(c.obstacle_tests == 3);
}

TEST_CASE("subdivisions")
{
    CHECK(segment_subdivisions(0.1, 0.25) == 1);
    CHECK(segment_subdivisions(0.25, 0.25) == 1);
    CHECK(segment_subdivisions(0.3, 0.25) == 2);
    CHECK(segment_subdivisions(1.0, 0.25) == 4);
    CHECK(segment_subdivisions(1.01, 0.25) == 8);
    CHECK_THROWS(segment_subdivisions(1.0, 0.0));
}

TEST_CASE("segment examples")
{
    const Scenario s = one_obstacle({10, 10}, {10, 10}, 2.0);
    CHECK(segment_collides({0, 0, 0}, {3, 0, 1}, s) == CollisionState::NoCollision);
    CHECK(segment_collides({0, 0, 0}, {10, 11, 1}, s) == CollisionState::Collision);
    // crossing the centre at the obstacle's time
    CHECK(segment_collides({7, 10, 1}, {13, 10, 1.5}, s) == CollisionState::Collision);
    CHECK(dense_clearance({7, 10, 1}, {13, 10, 1.5}, s, 0.0025) < 0);
    CHECK_THROWS_AS(segment_collides({0, 0, 1}, {1, 1, 1}, s), std::domain_error);
    CHECK_THROWS_AS(segment_collides({0, 0, 1}, {1, 1, 0.5}, s), std::domain_error);

    // moving obstacle: the same spatial segment is blocked early and clear late
    const Scenario m = one_obstacle({0, 10}, {20, 10}, 1.0, 20);
    CHECK(segment_collides({5, 5, 4}, {5, 15, 6}, m) == CollisionState::Collision);
    CHECK(segment_collides({5, 5, 14}, {5, 15, 16}, m) == CollisionState::NoCollision);
}

TEST_CASE("agrees with a dense-sampling oracle")
{
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = kDefaultCollisionStep;
    int collisions = 0;
    int clear = 0;
    for (int i = 0; i < 3000; ++i) {
        Scenario s;
        s.edge_length = 30;
        s.timesteps = 10;
        s.goal = {30, 30};
        for (int k = 0; k < 3; ++k) {
            s.obstacles.push_back({{u(gen) * 30, u(gen) * 30}, {u(gen) * 30, u(gen) * 30}, 0.5 + 2 * u(gen)});
        }
        const SpaceTimePoint a{u(gen) * 30, u(gen) * 30, u(gen) * 8};
        SpaceTimePoint b{a.x + (u(gen) - 0.5) * 6, a.y + (u(gen) - 0.5) * 6, a.t + 0.01 + u(gen) * 2};
        b.x = std::clamp(b.x, 0.0, 30.0);
        b.y = std::clamp(b.y, 0.0, 30.0);

        const double fine = h / 100;
        const double clearance = dense_clearance(a, b, s, fine);
        // with w_t = 1, distance to an obstacle changes by at most (1 + v) per unit of metric length
        const double lip = 1.0 + max_speed(s);
        const auto got = segment_collides(a, b, s, h);
        if (clearance < -lip * h) {
            REQUIRE(got == CollisionState::Collision);
            ++collisions;
        }
        if (clearance > lip * fine) {
            REQUIRE(got == CollisionState::NoCollision);
            ++clear;
        }
    }
    CHECK(collisions > 30);
    CHECK(clear > 100);
}

TEST_CASE("refining h never loses a collision")
{
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int flips_seen = 0;
    for (int i = 0; i < 3000; ++i) {
        Scenario s;
        s.edge_length = 30;
        s.timesteps = 10;
        s.goal = {30, 30};
        for (int k = 0; k < 4; ++k) {
            s.obstacles.push_back({{u(gen) * 30, u(gen) * 30}, {u(gen) * 30, u(gen) * 30}, 0.2 + u(gen)});
        }
        const SpaceTimePoint a{u(gen) * 30, u(gen) * 30, u(gen) * 5};
        const SpaceTimePoint b{std::clamp(a.x + (u(gen) - 0.5) * 10, 0.0, 30.0),
                               std::clamp(a.y + (u(gen) - 0.5) * 10, 0.0, 30.0), a.t + 0.01 + u(gen) * 4};
        double h = 2.0;
        bool hit = false;
        for (int r = 0; r < 8; ++r) {
            const bool now = segment_collides(a, b, s, h) == CollisionState::Collision;
            REQUIRE((!hit || now));
            if (now && !hit && r > 0) {
                ++flips_seen;
            }
            hit = hit || now;
            h *= 0.3 + 0.6 * u(gen);
        }
    }
    CHECK(flips_seen > 0);  // finer sampling did find extra collisions sometimes
}

TEST_CASE("paths")
{
    Scenario s;
    s.edge_length = 20;
    s.timesteps = 10;
    s.goal = {20, 20};
    const std::vector<SpaceTimePoint> straight{{0, 0, 0}, {20, 20, 10}};
    CHECK(validate_path(straight, s));

    const std::vector<SpaceTimePoint> backwards{{0, 0, 0}, {10, 10, 6}, {20, 20, 5}};
    CHECK_FALSE(validate_path(backwards, s));
    const std::vector<SpaceTimePoint> flat{{0, 0, 0}, {10, 10, 5}, {20, 20, 5}};
    CHECK_FALSE(validate_path(flat, s));
    const std::vector<SpaceTimePoint> short_of_goal{{0, 0, 0}, {15, 15, 10}};
    CHECK_FALSE(validate_path(short_of_goal, s));
    const std::vector<SpaceTimePoint> wrong_start{{1, 0, 0}, {20, 20, 10}};
    CHECK_FALSE(validate_path(wrong_start, s));
    CHECK_FALSE(validate_path(std::vector<SpaceTimePoint>{}, s));

    // pierced obstacle: the straight path passes (10,10) at t = 5
    Scenario blocked = s;
    blocked.obstacles.push_back({{10, 10}, {10, 10}, 1.0});
    REQUIRE(dense_clearance(straight[0], straight[1], blocked, 0.0025) < 0);
    CHECK_FALSE(validate_path(straight, blocked));
    CHECK(first_colliding_edge(straight, blocked) == 0);
    const std::vector<SpaceTimePoint> detour{{0, 0, 0}, {0, 20, 5}, {20, 20, 10}};
    CHECK(validate_path(detour, blocked));
    CHECK(first_colliding_edge(detour, blocked) == -1);
}

TEST_CASE("path length")
{
    const std::vector<SpaceTimePoint> one{{0, 0, 0}, {3, 4, 1}};
    CHECK(path_length(one) == doctest::Approx(5.0));
    const std::vector<SpaceTimePoint> single{{1, 1, 1}};
    CHECK(path_length(single) == 0.0);
    const std::vector<SpaceTimePoint> two{{0, 0, 0}, {3, 4, 1}, {6, 8, 2}};
    CHECK(path_length(two) == doctest::Approx(10.0));
}
