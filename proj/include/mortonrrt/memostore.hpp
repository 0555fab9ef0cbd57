/*! @file
 * @brief Morton store: the bounded memo shared by approximate nearest
 *        neighbour and collision memoization
 *
 * Geometry follows a fully associative CAM: capacity_bytes / line_bytes lines,
 * each tagged by a masked Morton key and holding up to entries_per_line
 * (state, node) entries in a ring. A write miss with no free line evicts the
 * line with the oldest reference stamp; a read miss changes nothing.
 *
 * The software and hardware backends share this one implementation, so they
 * answer every query identically. They differ only in how record_cost prices
 * each operation.
 */
#pragma once

#include "mortonrrt/collision.hpp"
#include "mortonrrt/cost_model.hpp"
#include "mortonrrt/morton.hpp"
#include "mortonrrt/spatial.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace mrrt {

/// Node handle stored with COLLISION entries, which refer to no tree node.
inline constexpr NodeRef kNoNode{0xffffffffu};

struct StoreConfig
{
    std::size_t capacity_bytes = 32768;
    std::size_t line_bytes = 64;
    std::size_t entries_per_line = 8;
    QuantConfig quant;
    StoreBackend backend = StoreBackend::Software;

    std::size_t lines() const { return line_bytes == 0 ? 0 : capacity_bytes / line_bytes; }

    /// Throws std::invalid_argument unless entries_per_line * 8 == line_bytes
    /// and the quantization is valid.
    void validate() const;
};

struct StoreEntry
{
    CollisionState state = CollisionState::NoCollision;
    NodeRef node = kNoNode;
    double node_t = 0.0;
};

struct StoreLine
{
    MortonKey tag;
    std::vector<StoreEntry> ring;  ///< capacity entries_per_line
    std::uint32_t head = 0;        ///< next slot to write
    std::uint32_t count = 0;
    std::uint64_t last_ref = 0;
    bool valid = false;

    /// i = 0 is the newest entry.
    const StoreEntry& newest(std::uint32_t i) const
    {
        const auto cap = static_cast<std::uint32_t>(ring.size());
        return ring[(head + cap - 1 - i) % cap];
    }
};

enum class StoreOp : std::uint8_t
{
    Lookup,
    Update,
};

struct StoreCounters
{
    std::uint64_t lookups = 0;
    std::uint64_t updates = 0;
    std::uint64_t tag_hits = 0;
    std::uint64_t evictions = 0;
};

class MortonStore
{
public:
    explicit MortonStore(StoreConfig cfg);

    /// Most recently inserted NO_COLLISION entry in p's cell with node_t < p.t.
    std::optional<NodeRef> morton_nn(const SpaceTimePoint& p);

    /// MISS on tag miss; COLLISION if any entry of the hit line collides.
    CollisionState morton_col(const SpaceTimePoint& p);

    /// Requires state != MISS (std::invalid_argument otherwise).
    void morton_update(const SpaceTimePoint& p, CollisionState state, NodeRef r);

    /// Charges one store operation to the operation tally.
    void record_cost(StoreOp op);

    const StoreConfig& config() const { return cfg_; }
    const OpCounts& op_counts() const { return ops_; }
    const StoreCounters& counters() const { return counters_; }

    double modeled_ops(const CostModel& cm) const { return cm.ops(ops_, cfg_.backend); }
    double modeled_cycles(const CostModel& cm) const { return cm.cycles(ops_, cfg_.backend); }

    std::size_t line_count() const { return lines_.size(); }
    std::size_t live_lines() const { return index_.size(); }
    std::size_t live_entries() const;
    const std::vector<StoreLine>& lines() const { return lines_; }

    /// Slot currently holding `tag`, if resident.
    std::optional<std::size_t> find_line(MortonKey tag) const;

private:
    static constexpr std::uint32_t kNil = 0xffffffffu;

    StoreLine* lookup(MortonKey tag);
    void touch(std::uint32_t slot);
    void unlink(std::uint32_t slot);
    void push_front(std::uint32_t slot);
    std::uint32_t allocate(MortonKey tag);

    StoreConfig cfg_;
    std::vector<StoreLine> lines_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    // Recency list over resident lines, most recent at head_. Ordered by
    // last_ref, so tail_ is always the minimum stamp.
    std::vector<std::uint32_t> prev_;
    std::vector<std::uint32_t> next_;
    std::uint32_t head_ = kNil;
    std::uint32_t tail_ = kNil;
    std::uint32_t next_free_ = 0;
    std::uint64_t clock_ = 0;
    OpCounts ops_;
    StoreCounters counters_;
};

} // namespace mrrt
