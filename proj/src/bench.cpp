#include "mortonrrt/bench.hpp"

#include "mortonrrt/random.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mrrt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt_shape_number(double v)
{
    return fmt_double(v);
}

double mean(const std::vector<double>& v)
{
    if (v.empty()) {
        return kNaN;
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double geomean_or_nan(const std::vector<double>& v)
{
    std::vector<double> finite;
    for (double x : v) {
        if (std::isfinite(x) && x > 0.0) {
            finite.push_back(x);
        }
    }
    return finite.empty() ? kNaN : geomean(finite);
}

} // namespace

std::string WorkloadShape::id() const
{
    return "l" + fmt_shape_number(edge_length) + "_T" + std::to_string(timesteps) + "_L" +
           std::to_string(obstacles);
}

std::vector<WorkloadShape> SuiteConfig::shapes() const
{
    std::vector<WorkloadShape> out;
    for (double l : edge_lengths) {
        for (int t : timestep_counts) {
            for (int n : obstacle_counts) {
                out.push_back({l, t, n});
            }
        }
    }
    return out;
}

void SuiteConfig::validate() const
{
    if (trials < 1) {
        throw std::invalid_argument("suite: trials must be >= 1");
    }
    if (variants.empty()) {
        throw std::invalid_argument("suite: no variants requested");
    }
    for (const auto& shape : shapes()) {
        Scenario probe = generate_synthetic(shape.edge_length, shape.timesteps, 0, 0, obstacle_radius);
        planner.validate(probe);
    }
}

double geomean(std::span<const double> values)
{
    if (values.empty()) {
        throw std::domain_error("geomean: empty input");
    }
    double acc = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) {
            throw std::domain_error("geomean: values must be > 0");
        }
        acc += std::log(v);
    }
    return std::exp(acc / static_cast<double>(values.size()));
}

double store_share(const PlanStats& stats)
{
    if (!(stats.modeled_ops > 0.0)) {
        throw std::domain_error("store_share: zero modeled operations");
    }
    return stats.modeled_store_ops / stats.modeled_ops;
}

std::uint64_t path_digest(std::span<const SpaceTimePoint> path)
{
    // FNV-1a over the raw coordinate bits
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& p : path) {
        for (double v : {p.x, p.y, p.t}) {
            const auto bits = std::bit_cast<std::uint64_t>(v);
            for (int i = 0; i < 8; ++i) {
                h ^= (bits >> (8 * i)) & 0xffu;
                h *= 0x100000001b3ULL;
            }
        }
    }
    return h;
}

double modeled_speedup(const PlanStats& baseline, const PlanStats& candidate)
{
    if (!(candidate.modeled_cycles > 0.0)) {
        throw std::domain_error("modeled_speedup: candidate has zero cycles");
    }
    return baseline.modeled_cycles / candidate.modeled_cycles;
}

SuiteSummary summarize(std::span<const BenchRow> rows, std::span<const WorkloadShape> shapes)
{
    SuiteSummary summary;
    std::map<Variant, std::vector<double>> wall, modeled, length, share;

    for (std::size_t ci = 0; ci < shapes.size(); ++ci) {
        ConfigSummary cs;
        cs.config_index = ci;
        cs.shape = shapes[ci];

        std::map<Variant, std::map<int, const BenchRow*>> by_variant;
        for (const auto& r : rows) {
            if (r.config_index == ci) {
                by_variant[r.variant][r.trial] = &r;
            }
        }
        for (const auto& [variant, trials] : by_variant) {
            VariantSummary vs;
            std::vector<double> w, ops, cyc, sh, a, b;
            for (const auto& [trial, r] : trials) {
                ++vs.trials;
                vs.successes += r->success ? 1 : 0;
                w.push_back(r->wall_time_ms);
                ops.push_back(r->modeled_ops);
                cyc.push_back(r->modeled_cycles);
                sh.push_back(r->store_share);
                a.push_back(r->alpha);
                b.push_back(r->beta);
            }
            vs.mean_wall_ms = mean(w);
            vs.mean_ops = mean(ops);
            vs.mean_cycles = mean(cyc);
            vs.mean_store_share = mean(sh);
            vs.mean_alpha = mean(a);
            vs.mean_beta = mean(b);
            cs.variants[variant] = vs;
        }

        auto base_it = by_variant.find(Variant::Baseline);
        for (auto& [variant, vs] : cs.variants) {
            vs.wall_speedup = vs.modeled_speedup = vs.length_ratio = kNaN;
            if (base_it == by_variant.end()) {
                continue;
            }
            const VariantSummary& base = cs.variants.at(Variant::Baseline);
            if (vs.mean_wall_ms > 0.0) {
                vs.wall_speedup = base.mean_wall_ms / vs.mean_wall_ms;
            }
            if (vs.mean_cycles > 0.0) {
                vs.modeled_speedup = base.mean_cycles / vs.mean_cycles;
            }
            std::vector<double> base_len, cand_len;
            for (const auto& [trial, r] : by_variant.at(variant)) {
                auto bt = base_it->second.find(trial);
                if (bt != base_it->second.end() && r->success && bt->second->success) {
                    base_len.push_back(bt->second->path_len);
                    cand_len.push_back(r->path_len);
                }
            }
            vs.paired_successes = static_cast<int>(cand_len.size());
            const double mb = mean(base_len);
            if (!cand_len.empty() && mb > 0.0) {
                vs.length_ratio = mean(cand_len) / mb;
            }
        }

        for (const auto& [variant, vs] : cs.variants) {
            wall[variant].push_back(vs.wall_speedup);
            modeled[variant].push_back(vs.modeled_speedup);
            length[variant].push_back(vs.length_ratio);
            share[variant].push_back(vs.mean_store_share);
        }
        summary.configs.push_back(std::move(cs));
    }

    for (const auto& [variant, values] : wall) {
        SuiteTotals t;
        t.wall_speedup = geomean_or_nan(values);
        t.modeled_speedup = geomean_or_nan(modeled[variant]);
        t.length_ratio = geomean_or_nan(length[variant]);
        t.store_share = geomean_or_nan(share[variant]);
        summary.totals[variant] = t;
    }
    return summary;
}

SuiteResult run_suite(const SuiteConfig& sc, const CostModel& cm, const ProgressFn& progress)
{
    sc.validate();
    cm.validate();
    const auto shapes = sc.shapes();

    struct Task
    {
        std::size_t config_index;
        int trial;
    };
    std::vector<Task> tasks;
    for (std::size_t ci = 0; ci < shapes.size(); ++ci) {
        for (int trial = 0; trial < sc.trials; ++trial) {
            tasks.push_back({ci, trial});
        }
    }

    std::vector<BenchRow> rows;
    std::mutex mu;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task task = tasks[i];
            const WorkloadShape& shape = shapes[task.config_index];
            const auto trial = static_cast<std::uint64_t>(task.trial);
            const std::uint64_t scenario_seed = derive_seed(sc.seed_base, task.config_index, 2 * trial);
            const std::uint64_t planner_seed = derive_seed(sc.seed_base, task.config_index, 2 * trial + 1);
            const Scenario scenario = generate_synthetic(shape.edge_length, shape.timesteps, shape.obstacles,
                                                         scenario_seed, sc.obstacle_radius);
            for (Variant v : sc.variants) {
                PlannerConfig pc = sc.planner;
                pc.variant = v;
                pc.seed = planner_seed;
                const PlanResult res = plan(scenario, pc, cm);

                BenchRow row;
                row.config_index = task.config_index;
                row.shape = shape;
                row.variant = v;
                row.trial = task.trial;
                row.scenario_seed = scenario_seed;
                row.planner_seed = planner_seed;
                row.success = res.success();
                row.iterations = res.stats.iterations;
                row.nodes = res.stats.nodes;
                row.nn_hits = res.stats.nn_store_hits;
                row.col_hits = res.stats.col_store_hits;
                row.alpha = res.stats.alpha;
                row.beta = res.stats.beta;
                row.modeled_ops = res.stats.modeled_ops;
                row.modeled_cycles = res.stats.modeled_cycles;
                row.store_share = store_share(res.stats);
                row.path_len = res.stats.path_len;
                row.path_digest = res.path ? path_digest(*res.path) : 0;
                row.wall_time_ms = res.stats.wall_time_ms;

                std::lock_guard lock(mu);
                rows.push_back(row);
                if (progress) {
                    progress(row);
                }
            }
        }
    };

    const unsigned jobs = std::max(1u, sc.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }

    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.config_index, a.variant, a.trial) < std::tie(b.config_index, b.variant, b.trial);
    });

    SuiteResult result;
    result.summary = summarize(rows, shapes);
    result.rows = std::move(rows);
    return result;
}

namespace {

constexpr const char* kBaseColumns[] = {
    "kind",       "config",    "edge",      "timesteps",   "obstacles",      "variant",
    "trial",      "scenario_seed", "planner_seed", "success", "iterations",   "nodes",
    "nn_hits",    "col_hits",  "alpha",     "beta",        "modeled_ops",    "modeled_cycles",
    "store_share", "path_len",  "path_digest",
};

void summary_line(std::ostream& out, const std::string& config, Variant v, const char* metric, double value)
{
    out << "summary," << config << ',' << to_string(v) << ',' << metric << ',' << fmt_double(value) << '\n';
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

template <class T>
T parse_num(const std::string& s, const char* column)
{
    T value{};
    if (s == "nan") {
        if constexpr (std::is_floating_point_v<T>) {
            return kNaN;
        }
    }
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument(std::string("csv: bad value for ") + column + ": '" + s + "'");
    }
    return value;
}

} // namespace

void emit_csv(std::span<const BenchRow> rows, const SuiteSummary& summary, std::ostream& out,
              const CsvOptions& opts)
{
    bool first = true;
    for (const char* col : kBaseColumns) {
        out << (first ? "" : ",") << col;
        first = false;
    }
    if (opts.include_timing) {
        out << ",wall_ms";
    }
    out << '\n';

    for (const auto& r : rows) {
        out << "run," << r.shape.id() << ',' << fmt_double(r.shape.edge_length) << ',' << r.shape.timesteps
            << ',' << r.shape.obstacles << ',' << to_string(r.variant) << ',' << r.trial << ','
            << r.scenario_seed << ',' << r.planner_seed << ',' << (r.success ? 1 : 0) << ',' << r.iterations
            << ',' << r.nodes << ',' << r.nn_hits << ',' << r.col_hits << ',' << fmt_double(r.alpha) << ','
            << fmt_double(r.beta) << ',' << fmt_double(r.modeled_ops) << ',' << fmt_double(r.modeled_cycles)
            << ',' << fmt_double(r.store_share) << ',' << fmt_double(r.path_len) << ',' << r.path_digest;
        if (opts.include_timing) {
            out << ',' << fmt_double(r.wall_time_ms);
        }
        out << '\n';
    }

    for (const auto& cs : summary.configs) {
        const std::string id = cs.shape.id();
        for (const auto& [v, vs] : cs.variants) {
            summary_line(out, id, v, "successes", vs.successes);
            summary_line(out, id, v, "mean_modeled_cycles", vs.mean_cycles);
            summary_line(out, id, v, "modeled_speedup", vs.modeled_speedup);
            summary_line(out, id, v, "length_ratio", vs.length_ratio);
            summary_line(out, id, v, "store_share", vs.mean_store_share);
            if (opts.include_timing) {
                summary_line(out, id, v, "mean_wall_ms", vs.mean_wall_ms);
                summary_line(out, id, v, "wall_speedup", vs.wall_speedup);
            }
        }
    }
    for (const auto& [v, t] : summary.totals) {
        summary_line(out, "geomean", v, "modeled_speedup", t.modeled_speedup);
        summary_line(out, "geomean", v, "length_ratio", t.length_ratio);
        summary_line(out, "geomean", v, "store_share", t.store_share);
        if (opts.include_timing) {
            summary_line(out, "geomean", v, "wall_speedup", t.wall_speedup);
        }
    }
    if (!out) {
        throw std::runtime_error("emit_csv: write failed");
    }
}

std::vector<BenchRow> parse_csv_rows(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("csv: missing header");
    }
    const auto header = split(line);
    const bool timing = !header.empty() && header.back() == "wall_ms";
    const std::size_t expected = std::size(kBaseColumns) + (timing ? 1 : 0);
    if (header.size() != expected || header[0] != "kind") {
        throw std::invalid_argument("csv: unexpected header");
    }

    std::vector<BenchRow> rows;
    std::map<std::string, std::size_t> config_ids;
    while (std::getline(in, line)) {
        if (line.rfind("run,", 0) != 0) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != expected) {
            throw std::invalid_argument("csv: wrong field count in '" + line + "'");
        }
        BenchRow r;
        auto [it, inserted] = config_ids.emplace(f[1], config_ids.size());
        r.config_index = it->second;
        r.shape.edge_length = parse_num<double>(f[2], "edge");
        r.shape.timesteps = parse_num<int>(f[3], "timesteps");
        r.shape.obstacles = parse_num<int>(f[4], "obstacles");
        r.variant = parse_variant(f[5]);
        r.trial = parse_num<int>(f[6], "trial");
        r.scenario_seed = parse_num<std::uint64_t>(f[7], "scenario_seed");
        r.planner_seed = parse_num<std::uint64_t>(f[8], "planner_seed");
        r.success = parse_num<int>(f[9], "success") != 0;
        r.iterations = parse_num<std::uint64_t>(f[10], "iterations");
        r.nodes = parse_num<std::uint64_t>(f[11], "nodes");
        r.nn_hits = parse_num<std::uint64_t>(f[12], "nn_hits");
        r.col_hits = parse_num<std::uint64_t>(f[13], "col_hits");
        r.alpha = parse_num<double>(f[14], "alpha");
        r.beta = parse_num<double>(f[15], "beta");
        r.modeled_ops = parse_num<double>(f[16], "modeled_ops");
        r.modeled_cycles = parse_num<double>(f[17], "modeled_cycles");
        r.store_share = parse_num<double>(f[18], "store_share");
        r.path_len = parse_num<double>(f[19], "path_len");
        r.path_digest = parse_num<std::uint64_t>(f[20], "path_digest");
        if (timing) {
            r.wall_time_ms = parse_num<double>(f[21], "wall_ms");
        }
        rows.push_back(r);
    }
    return rows;
}

namespace {

void print_total(std::ostream& out, const char* label, double value, const char* unit, const char* published)
{
    out << "  " << std::left << std::setw(34) << label << std::right << std::setw(9) << std::fixed
        << std::setprecision(3) << value << unit;
    if (published) {
        out << "   (published: " << published << unit << ')';
    }
    out << '\n';
}

} // namespace

void print_report(const SuiteResult& result, std::ostream& out, bool include_timing)
{
    const auto flags = out.flags();
    out << std::left << std::setw(16) << "config" << std::setw(11) << "variant" << std::right << std::setw(6)
        << "ok" << std::setw(14) << "cycles" << std::setw(10) << "mspeedup" << std::setw(9) << "lenratio"
        << std::setw(8) << "alpha" << std::setw(8) << "beta" << std::setw(8) << "share";
    if (include_timing) {
        out << std::setw(11) << "wall_ms" << std::setw(9) << "wspeedup";
    }
    out << '\n';
    for (const auto& cs : result.summary.configs) {
        for (const auto& [v, vs] : cs.variants) {
            out << std::left << std::setw(16) << cs.shape.id() << std::setw(11) << to_string(v) << std::right
                << std::setw(3) << vs.successes << '/' << std::setw(2) << vs.trials << std::fixed
                << std::setprecision(0) << std::setw(14) << vs.mean_cycles << std::setprecision(3)
                << std::setw(10) << vs.modeled_speedup << std::setw(9) << vs.length_ratio << std::setw(8)
                << vs.mean_alpha << std::setw(8) << vs.mean_beta << std::setw(8) << vs.mean_store_share;
            if (include_timing) {
                out << std::setprecision(2) << std::setw(11) << vs.mean_wall_ms << std::setprecision(3)
                    << std::setw(9) << vs.wall_speedup;
            }
            out << '\n';
        }
    }

    out << "\ngeomean over configurations\n";
    const auto& totals = result.summary.totals;
    if (auto it = totals.find(Variant::SwMorton); it != totals.end()) {
        if (include_timing) {
            print_total(out, "sw-morton wall-clock speedup", it->second.wall_speedup, "x", "1.96");
        }
        print_total(out, "sw-morton modeled speedup", it->second.modeled_speedup, "x", "2.28");
        print_total(out, "sw-morton length ratio", it->second.length_ratio, "x", "1.42");
        print_total(out, "sw-morton store share", it->second.store_share, "", "0.27");
    }
    if (auto it = totals.find(Variant::HwMorton); it != totals.end()) {
        if (include_timing) {
            print_total(out, "hw-morton wall-clock speedup", it->second.wall_speedup, "x", nullptr);
        }
        print_total(out, "hw-morton modeled speedup", it->second.modeled_speedup, "x", "8.0");
        print_total(out, "hw-morton length ratio", it->second.length_ratio, "x", "1.65");
    }
    out.flags(flags);
}

void print_profile(const SuiteResult& result, std::ostream& out)
{
    const auto flags = out.flags();
    out << "store share of modeled instructions\n";
    out << std::left << std::setw(16) << "config" << std::setw(11) << "variant" << std::right << std::setw(10)
        << "share" << '\n';
    for (const auto& cs : result.summary.configs) {
        for (const auto& [v, vs] : cs.variants) {
            if (!uses_store(v)) {
                continue;
            }
            out << std::left << std::setw(16) << cs.shape.id() << std::setw(11) << to_string(v) << std::right
                << std::fixed << std::setprecision(4) << std::setw(10) << vs.mean_store_share << '\n';
        }
    }
    for (const auto& [v, t] : result.summary.totals) {
        if (uses_store(v)) {
            out << "geomean " << to_string(v) << ": " << std::fixed << std::setprecision(4) << t.store_share;
            if (v == Variant::SwMorton) {
                out << "  (reference ~0.27, worst > 0.45)";
            }
            out << '\n';
        }
    }
    out.flags(flags);
}

} // namespace mrrt
