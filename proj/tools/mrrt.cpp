// mrrt: scenario generation, single planning runs and the benchmark suite.

#include "mortonrrt/bench.hpp"
#include "mortonrrt/cost_model.hpp"
#include "mortonrrt/planner.hpp"
#include "mortonrrt/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace mrrt;

struct StoreFlags
{
    unsigned k = 18;
    std::uint32_t scale = 16;
    std::size_t capacity = 32768;
    std::string cost_model_file;
    std::optional<double> sw_store_cost;

    void attach(CLI::App* app)
    {
        app->add_option("--k", k, "Morton mask bits")->capture_default_str();
        app->add_option("--scale", scale, "quantization subunits per map unit (power of two)")
            ->capture_default_str();
        app->add_option("--store-capacity", capacity, "Morton store capacity in bytes")->capture_default_str();
        app->add_option("--cost-model", cost_model_file, "cost model JSON file");
        app->add_option("--sw-store-cost", sw_store_cost, "instructions per software store op (overrides the cost model)");
    }

    void apply(PlannerConfig& pc) const
    {
        pc.store.capacity_bytes = capacity;
        pc.store.quant.mask_bits = k;
        pc.store.quant.scale = scale;
    }

    CostModel cost_model() const
    {
        CostModel cm = cost_model_file.empty() ? CostModel{} : load_cost_model_file(cost_model_file);
        if (sw_store_cost) {
            cm.sw_store_op = *sw_store_cost;
            cm.validate();
        }
        return cm;
    }
};

struct PlannerFlags
{
    double step = 1.0;
    double time_weight = 1.0;
    double collision_step = kDefaultCollisionStep;
    double goal_bias = 0.05;
    std::uint64_t max_iters = 1'000'000;

    void attach(CLI::App* app)
    {
        app->add_option("--step", step, "steer step length")->capture_default_str();
        app->add_option("--time-weight", time_weight, "time weight w_t of the distance metric")
            ->capture_default_str();
        app->add_option("--collision-step", collision_step, "segment sampling spacing h")->capture_default_str();
        app->add_option("--goal-bias", goal_bias, "probability of sampling the goal column")
            ->capture_default_str();
        app->add_option("--max-iters", max_iters, "iteration limit per run")->capture_default_str();
    }

    void apply(PlannerConfig& pc) const
    {
        pc.step = step;
        pc.time_weight = time_weight;
        pc.collision_step = collision_step;
        pc.goal_bias = goal_bias;
        pc.max_iters = max_iters;
    }
};

template <class Fn>
void with_output(const std::string& path, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    fn(out);
}

nlohmann::json plan_to_json(const PlanResult& res, Variant variant, std::uint64_t seed)
{
    using nlohmann::json;
    const auto& st = res.stats;
    json doc;
    doc["variant"] = to_string(variant);
    doc["seed"] = seed;
    doc["status"] = res.success() ? "solved" : "unreachable";
    json path = json::array();
    if (res.path) {
        for (const auto& p : *res.path) {
            path.push_back(json::array({p.x, p.y, p.t}));
        }
    }
    doc["path"] = std::move(path);
    json counts = json::object();
    for (std::size_t i = 0; i < kOpKindCount; ++i) {
        counts[std::string(to_string(static_cast<OpKind>(i)))] = st.counts.n[i];
    }
    doc["stats"] = {
        {"nodes", st.nodes},
        {"obstacles", st.obstacle_count},
        {"iterations", st.iterations},
        {"extend_attempts", st.extend_attempts},
        {"exact_nn", st.exact_nn},
        {"exact_collision", st.exact_collision},
        {"nn_store_hits", st.nn_store_hits},
        {"col_store_hits", st.col_store_hits},
        {"revalidation_failures", st.revalidation_failures},
        {"alpha", st.alpha},
        {"beta", st.beta},
        {"op_counts", counts},
        {"modeled_ops", st.modeled_ops},
        {"modeled_cycles", st.modeled_cycles},
        {"store_share", st.modeled_ops > 0 ? st.modeled_store_ops / st.modeled_ops : 0.0},
        {"path_len", st.path_len},
        {"wall_time_ms", st.wall_time_ms},
    };
    return doc;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Space-time RRT with Morton-store memoization"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic scenario file");
    double gen_edge = 100.0;
    int gen_steps = 20;
    int gen_obstacles = 5;
    std::uint64_t gen_seed = 1;
    double gen_radius = kDefaultObstacleRadius;
    std::string gen_out;
    gen->add_option("--edge", gen_edge, "map edge length l")->capture_default_str();
    gen->add_option("--timesteps", gen_steps, "horizon T")->capture_default_str();
    gen->add_option("--obstacles", gen_obstacles, "number of moving obstacles")->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--radius", gen_radius, "obstacle radius")->capture_default_str();
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "plan one scenario and print path + stats as JSON");
    std::string plan_scenario;
    std::string plan_variant = "baseline";
    std::uint64_t plan_seed = 1;
    std::string plan_out;
    StoreFlags plan_store;
    PlannerFlags plan_flags;
    plan_cmd->add_option("--scenario", plan_scenario, "scenario file")->required();
    plan_cmd->add_option("--variant", plan_variant, "baseline | sw-morton | hw-morton")->capture_default_str();
    plan_cmd->add_option("--seed", plan_seed, "planner seed")->capture_default_str();
    plan_cmd->add_option("--out", plan_out, "output file (default stdout)");
    plan_store.attach(plan_cmd);
    plan_flags.attach(plan_cmd);

    // bench / profile share the suite flags
    struct SuiteFlags
    {
        std::vector<double> edges{100.0, 200.0};
        std::vector<int> steps{10, 100};
        std::vector<int> obstacles{5, 10, 20};
        std::optional<int> trials;
        bool quick = false;
        std::uint64_t seed = 1;
        std::vector<std::string> variants{"baseline", "sw-morton", "hw-morton"};
        unsigned jobs = 1;
        double radius = kDefaultObstacleRadius;
        StoreFlags store;
        PlannerFlags planner;

        void attach(CLI::App* cmd)
        {
            cmd->add_option("--edge", edges, "map edge lengths")->capture_default_str();
            cmd->add_option("--timesteps", steps, "horizons")->capture_default_str();
            cmd->add_option("--obstacles", obstacles, "obstacle counts")->capture_default_str();
            cmd->add_option("--trials", trials, "trials per configuration (default 10)");
            cmd->add_flag("--quick", quick, "3 trials per configuration");
            cmd->add_option("--seed", seed, "base seed")->capture_default_str();
            cmd->add_option("--variant", variants, "variants to run")->capture_default_str();
            cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();
            cmd->add_option("--radius", radius, "obstacle radius")->capture_default_str();
            store.attach(cmd);
            planner.attach(cmd);
        }

        SuiteConfig build() const
        {
            SuiteConfig sc;
            sc.edge_lengths = edges;
            sc.timestep_counts = steps;
            sc.obstacle_counts = obstacles;
            sc.trials = trials ? *trials : (quick ? SuiteConfig::kQuickTrials : 10);
            sc.seed_base = seed;
            sc.variants.clear();
            for (const auto& v : variants) {
                sc.variants.push_back(parse_variant(v));
            }
            sc.jobs = jobs;
            sc.obstacle_radius = radius;
            store.apply(sc.planner);
            planner.apply(sc.planner);
            return sc;
        }
    };

    auto* bench = app.add_subcommand("bench", "run the configuration suite and write CSV");
    SuiteFlags bench_flags;
    std::string bench_out;
    bool bench_timing = false;
    bool bench_verbose = false;
    bench_flags.attach(bench);
    bench->add_option("--out", bench_out, "CSV output file (default stdout)");
    bench->add_flag("--timing", bench_timing, "include wall-clock columns (not byte-reproducible)");
    bench->add_flag("-v,--verbose", bench_verbose, "print a line per finished run to stderr");

    auto* profile = app.add_subcommand("profile", "report the store share of modeled instructions");
    SuiteFlags profile_flags;
    profile_flags.variants = {"sw-morton"};
    profile_flags.attach(profile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const Scenario s = generate_synthetic(gen_edge, gen_steps, gen_obstacles, gen_seed, gen_radius);
            with_output(gen_out, [&](std::ostream& out) { save_scenario(s, out); });
        } else if (plan_cmd->parsed()) {
            const Scenario s = load_scenario_file(plan_scenario);
            PlannerConfig pc;
            pc.variant = parse_variant(plan_variant);
            pc.seed = plan_seed;
            plan_store.apply(pc);
            plan_flags.apply(pc);
            const PlanResult res = plan(s, pc, plan_store.cost_model());
            with_output(plan_out, [&](std::ostream& out) {
                out << plan_to_json(res, pc.variant, plan_seed).dump(2) << '\n';
            });
        } else if (bench->parsed()) {
            const SuiteConfig sc = bench_flags.build();
            ProgressFn progress;
            if (bench_verbose) {
                progress = [](const BenchRow& r) {
                    std::cerr << r.shape.id() << ' ' << to_string(r.variant) << " trial " << r.trial
                              << (r.success ? " ok " : " unreachable ") << r.wall_time_ms << " ms\n";
                };
            }
            const SuiteResult result = run_suite(sc, bench_flags.store.cost_model(), progress);
            with_output(bench_out, [&](std::ostream& out) {
                emit_csv(result.rows, result.summary, out, CsvOptions{bench_timing});
            });
            if (!bench_out.empty() && bench_out != "-") {
                print_report(result, std::cout, bench_timing);
            }
        } else if (profile->parsed()) {
            const SuiteConfig sc = profile_flags.build();
            const SuiteResult result = run_suite(sc, profile_flags.store.cost_model());
            print_profile(result, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
