#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace mrrt {

/// Work categories the planner and the memo store report.
enum class OpKind : std::uint8_t
{
    Sample,        ///< one random sample drawn
    Steer,         ///< one steer computation
    NnNodeVisit,   ///< one kd-tree node examined by an exact NN query
    ObstacleTest,  ///< one (sample point, obstacle) distance test
    StoreLookup,   ///< morton_nn or morton_col
    StoreUpdate,   ///< morton_update
};

inline constexpr std::size_t kOpKindCount = 6;

std::string_view to_string(OpKind k);

enum class StoreBackend : std::uint8_t
{
    Software,
    Hardware,
};

std::string_view to_string(StoreBackend b);

struct OpCounts
{
    std::array<std::uint64_t, kOpKindCount> n{};

    std::uint64_t& operator[](OpKind k) { return n[static_cast<std::size_t>(k)]; }
    std::uint64_t operator[](OpKind k) const { return n[static_cast<std::size_t>(k)]; }

    std::uint64_t store_ops() const { return (*this)[OpKind::StoreLookup] + (*this)[OpKind::StoreUpdate]; }

    OpCounts& operator+=(const OpCounts& o)
    {
        for (std::size_t i = 0; i < kOpKindCount; ++i) {
            n[i] += o.n[i];
        }
        return *this;
    }

    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// Prices operation counts in modeled instructions and cycles. Stands in for
/// dynamic-instruction profiling of a compiled binary.
///
/// Software store ops cost `sw_store_op` instructions each. A hardware store
/// op is a single instruction whose cycles are the CAM latency. Every other
/// instruction takes `cpi` cycles.
struct CostModel
{
    double sample = 10.0;
    double steer = 20.0;
    double nn_node_visit = 12.0;
    double obstacle_test = 10.0;
    double sw_store_op = 40.0;
    double hw_store_op = 1.0;
    double hw_store_latency = 2.0;
    double cpi = 1.0;

    /// Throws std::invalid_argument on a negative cost, non-positive cpi or a
    /// hardware store op that is not exactly one instruction.
    void validate() const;

    double unit_ops(OpKind k, StoreBackend backend) const;
    double ops(const OpCounts& c, StoreBackend backend) const;
    double store_ops(const OpCounts& c, StoreBackend backend) const;
    double cycles(const OpCounts& c, StoreBackend backend) const;

    friend bool operator==(const CostModel&, const CostModel&) = default;
};

void save_cost_model(const CostModel& cm, std::ostream& out);
/// Missing keys keep their defaults; unknown keys are rejected.
CostModel load_cost_model(std::istream& in);
CostModel load_cost_model_file(const std::filesystem::path& path);

} // namespace mrrt
