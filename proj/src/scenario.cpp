#include "mortonrrt/scenario.hpp"

#include "mortonrrt/random.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mrrt {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "mortonrrt-scenario";
constexpr int kFormatVersion = 1;

bool in_square(const Vec2& p, double l) { return p.x >= 0.0 && p.x <= l && p.y >= 0.0 && p.y <= l; }

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

json point_to_json(const Vec2& p) { return json::array({p.x, p.y}); }

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ScenarioError(path + key, "missing field");
    }
    return *it;
}

double read_number(const json& v, const std::string& field)
{
    if (!v.is_number()) {
        throw ScenarioError(field, "expected a number");
    }
    double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ScenarioError(field, "not finite");
    }
    return d;
}

Vec2 read_point(const json& v, const std::string& field)
{
    if (!v.is_array() || v.size() != 2) {
        throw ScenarioError(field, "expected [x, y]");
    }
    return {read_number(v[0], field + "[0]"), read_number(v[1], field + "[1]")};
}

} // namespace

void Scenario::validate() const
{
    if (!(edge_length > 0.0) || !std::isfinite(edge_length)) {
        throw ScenarioError("edge_length", "must be a positive finite number");
    }
    if (timesteps < 1) {
        throw ScenarioError("timesteps", "must be >= 1");
    }
    if (!in_square(start, edge_length)) {
        throw ScenarioError("start", "outside the map");
    }
    if (!in_square(goal, edge_length)) {
        throw ScenarioError("goal", "outside the map");
    }
    if (!(goal_radius > 0.0)) {
        throw ScenarioError("goal_radius", "must be > 0");
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const auto& o = obstacles[i];
        std::string prefix = "obstacles[" + std::to_string(i) + "].";
        if (!(o.radius > 0.0) || !std::isfinite(o.radius)) {
            throw ScenarioError(prefix + "radius", "must be > 0");
        }
        if (!in_square(o.start_pos, edge_length)) {
            throw ScenarioError(prefix + "start_pos", "outside the map");
        }
        if (!in_square(o.end_pos, edge_length)) {
            throw ScenarioError(prefix + "end_pos", "outside the map");
        }
    }
}

Vec2 obstacle_position_at(const ObstacleTrack& track, double t, int timesteps)
{
    const double horizon = static_cast<double>(timesteps);
    if (!(t >= 0.0 && t <= horizon)) {
        throw std::domain_error("obstacle_position_at: t outside [0, T]");
    }
    const double f = t / horizon;
    return {track.start_pos.x + f * (track.end_pos.x - track.start_pos.x),
            track.start_pos.y + f * (track.end_pos.y - track.start_pos.y)};
}

Scenario generate_synthetic(double edge_length, int timesteps, int n_obstacles, std::uint64_t seed,
                            double obstacle_radius)
{
    if (!(edge_length > 0.0) || timesteps < 1 || n_obstacles < 0 || !(obstacle_radius > 0.0)) {
        throw std::invalid_argument("generate_synthetic: invalid parameters");
    }

    Scenario s;
    s.edge_length = edge_length;
    s.timesteps = timesteps;
    s.start = {0.0, 0.0};
    s.goal = {edge_length, edge_length};
    s.goal_radius = kDefaultGoalRadius;

    Rng rng(seed);
    auto draw = [&] { return Vec2{rng.uniform(0.0, edge_length), rng.uniform(0.0, edge_length)}; };

    // A track covering the root at t = 0 or the whole goal region at t = T
    // makes the instance unsolvable by construction; redraw those. The guard
    // stops pathological tiny maps from looping forever.
    const double start_clear = obstacle_radius;
    const double goal_clear = obstacle_radius + s.goal_radius;
    s.obstacles.reserve(static_cast<std::size_t>(n_obstacles));
    for (int i = 0; i < n_obstacles; ++i) {
        ObstacleTrack track;
        track.radius = obstacle_radius;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            track.start_pos = draw();
            track.end_pos = draw();
            if (distance(track.start_pos, s.start) > start_clear &&
                distance(track.end_pos, s.goal) > goal_clear) {
                break;
            }
        }
        s.obstacles.push_back(track);
    }
    return s;
}

void save_scenario(const Scenario& s, std::ostream& out)
{
    json doc;
    doc["format"] = kFormatTag;
    doc["version"] = kFormatVersion;
    doc["edge_length"] = s.edge_length;
    doc["timesteps"] = s.timesteps;
    doc["start"] = point_to_json(s.start);
    doc["goal"] = point_to_json(s.goal);
    doc["goal_radius"] = s.goal_radius;
    json obstacles = json::array();
    for (const auto& o : s.obstacles) {
        obstacles.push_back({{"start_pos", point_to_json(o.start_pos)},
                             {"end_pos", point_to_json(o.end_pos)},
                             {"radius", o.radius}});
    }
    doc["obstacles"] = std::move(obstacles);
    out << doc.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("save_scenario: write failed");
    }
}

Scenario load_scenario(std::istream& in)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError("document", e.what());
    }
    if (!doc.is_object()) {
        throw ScenarioError("document", "expected a JSON object");
    }
    if (auto it = doc.find("format"); it != doc.end() && *it != kFormatTag) {
        throw ScenarioError("format", "unexpected format tag");
    }
    if (auto it = doc.find("version"); it != doc.end() && *it != kFormatVersion) {
        throw ScenarioError("version", "unsupported version");
    }

    Scenario s;
    s.edge_length = read_number(require(doc, "edge_length", ""), "edge_length");
    const json& steps = require(doc, "timesteps", "");
    if (!steps.is_number_integer()) {
        throw ScenarioError("timesteps", "expected an integer");
    }
    s.timesteps = steps.get<int>();
    s.start = read_point(require(doc, "start", ""), "start");
    s.goal = read_point(require(doc, "goal", ""), "goal");
    s.goal_radius = read_number(require(doc, "goal_radius", ""), "goal_radius");

    const json& obstacles = require(doc, "obstacles", "");
    if (!obstacles.is_array()) {
        throw ScenarioError("obstacles", "expected an array");
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        std::string prefix = "obstacles[" + std::to_string(i) + "].";
        const json& o = obstacles[i];
        if (!o.is_object()) {
            throw ScenarioError("obstacles[" + std::to_string(i) + "]", "expected an object");
        }
        ObstacleTrack track;
        track.start_pos = read_point(require(o, "start_pos", prefix), prefix + "start_pos");
        track.end_pos = read_point(require(o, "end_pos", prefix), prefix + "end_pos");
        track.radius = read_number(require(o, "radius", prefix), prefix + "radius");
        s.obstacles.push_back(track);
    }

    s.validate();
    return s;
}

void save_scenario_file(const Scenario& s, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    save_scenario(s, out);
}

Scenario load_scenario_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return load_scenario(in);
}

std::string to_string(const Scenario& s)
{
    std::ostringstream out;
    save_scenario(s, out);
    return out.str();
}

} // namespace mrrt
