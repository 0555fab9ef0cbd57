#pragma once

#include "mortonrrt/cost_model.hpp"
#include "mortonrrt/planner.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mrrt {

/// One synthetic workload shape.
struct WorkloadShape
{
    double edge_length = 100.0;
    int timesteps = 10;
    int obstacles = 5;

    std::string id() const;
};

struct SuiteConfig
{
    std::vector<double> edge_lengths{100.0, 200.0};
    std::vector<int> timestep_counts{10, 100};
    std::vector<int> obstacle_counts{5, 10, 20};
    int trials = 10;
    std::uint64_t seed_base = 1;
    std::vector<Variant> variants{Variant::Baseline, Variant::SwMorton, Variant::HwMorton};
    double obstacle_radius = kDefaultObstacleRadius;
    /// Template for every run; variant and seed are overwritten per run.
    PlannerConfig planner;
    unsigned jobs = 1;

    static constexpr int kQuickTrials = 3;

    /// Cross product in (edge, timesteps, obstacles) order.
    std::vector<WorkloadShape> shapes() const;
    void validate() const;
};

struct BenchRow
{
    std::size_t config_index = 0;
    WorkloadShape shape;
    Variant variant = Variant::Baseline;
    int trial = 0;
    std::uint64_t scenario_seed = 0;
    std::uint64_t planner_seed = 0;
    bool success = false;
    std::uint64_t iterations = 0;
    std::uint64_t nodes = 0;
    std::uint64_t nn_hits = 0;
    std::uint64_t col_hits = 0;
    double alpha = 1.0;
    double beta = 1.0;
    double modeled_ops = 0.0;
    double modeled_cycles = 0.0;
    double store_share = 0.0;
    double path_len = 0.0;
    std::uint64_t path_digest = 0;  ///< 0 when unreachable
    double wall_time_ms = 0.0;
};

struct VariantSummary
{
    int trials = 0;
    int successes = 0;
    double mean_wall_ms = 0.0;
    double mean_ops = 0.0;
    double mean_cycles = 0.0;
    double mean_store_share = 0.0;
    double mean_alpha = 0.0;
    double mean_beta = 0.0;
    /// Ratios against the baseline of the same shape; NaN when undefined.
    double wall_speedup = 0.0;
    double modeled_speedup = 0.0;
    double length_ratio = 0.0;
    int paired_successes = 0;
};

struct ConfigSummary
{
    std::size_t config_index = 0;
    WorkloadShape shape;
    std::map<Variant, VariantSummary> variants;
};

/// Cross-shape geometric means of the per-shape ratios (NaN when no shape
/// contributes).
struct SuiteTotals
{
    double wall_speedup = 0.0;
    double modeled_speedup = 0.0;
    double length_ratio = 0.0;
    double store_share = 0.0;
};

struct SuiteSummary
{
    std::vector<ConfigSummary> configs;
    std::map<Variant, SuiteTotals> totals;
};

struct SuiteResult
{
    std::vector<BenchRow> rows;  ///< sorted by (config, variant, trial)
    SuiteSummary summary;
};

using ProgressFn = std::function<void(const BenchRow&)>;

/// Every variant of a trial plans the same scenario with the same seed.
/// Per-shape speedups are ratios of per-shape means (baseline / candidate);
/// length ratios use only trials where both runs succeeded. Suite totals are
/// geometric means over shapes.
SuiteResult run_suite(const SuiteConfig& sc, const CostModel& cm, const ProgressFn& progress = {});

/// Recomputes the summary from rows; run_suite uses this.
SuiteSummary summarize(std::span<const BenchRow> rows, std::span<const WorkloadShape> shapes);

/// exp(mean(log v)); throws std::domain_error for empty or non-positive input.
double geomean(std::span<const double> values);

/// Modeled store instructions over all modeled instructions.
/// Throws std::domain_error when the total is zero.
double store_share(const PlanStats& stats);

/// Order-sensitive hash of the exact coordinate bits; equal paths give equal digests.
std::uint64_t path_digest(std::span<const SpaceTimePoint> path);

/// baseline.modeled_cycles / candidate.modeled_cycles; throws
/// std::domain_error when the candidate has zero cycles.
double modeled_speedup(const PlanStats& baseline, const PlanStats& candidate);

struct CsvOptions
{
    /// Adds a wall_ms column and wall-clock summaries. Off by default so that
    /// identical flags give identical bytes.
    bool include_timing = false;
};

/// Header, one "run" line per row, then "summary,<config>,<variant>,<metric>,<value>" lines.
void emit_csv(std::span<const BenchRow> rows, const SuiteSummary& summary, std::ostream& out,
              const CsvOptions& opts = {});

/// Reads back the "run" lines written by emit_csv.
std::vector<BenchRow> parse_csv_rows(std::istream& in);

/// Human-readable tables with the published reference figures alongside.
void print_report(const SuiteResult& result, std::ostream& out, bool include_timing);

/// Per-shape store share table for the memoized variants.
void print_profile(const SuiteResult& result, std::ostream& out);

} // namespace mrrt
