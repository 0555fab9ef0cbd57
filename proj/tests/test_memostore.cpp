#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mortonrrt/memostore.hpp"

#include <deque>
#include <list>
#include <map>
#include <random>
#include <set>

using namespace mrrt;

namespace {

StoreConfig config(std::size_t capacity = 32768, StoreBackend b = StoreBackend::Software)
{
    StoreConfig c;
    c.capacity_bytes = capacity;
    c.backend = b;
    return c;
}

// Centre of cell i along x, cells laid out 4 map units apart (scale 16, k 18).
SpaceTimePoint cell(int i, double t = 1.0)
{
    return {4.0 * (i % 200) + 1.0, 4.0 * (i / 200) + 1.0, t};
}

/// Straightforward model: a list ordered by last reference plus per-tag
/// entry queues.
class ReferenceStore
{
public:
    explicit ReferenceStore(std::size_t lines)
        : lines_(lines)
    {
    }

    std::optional<NodeRef> nn(std::uint64_t tag, double t)
    {
        auto it = data_.find(tag);
        if (it == data_.end()) {
            return std::nullopt;
        }
        refresh(tag);
        const auto& q = it->second;
        for (auto e = q.rbegin(); e != q.rend(); ++e) {
            if (e->state == CollisionState::NoCollision && e->node_t < t) {
                return e->node;
            }
        }
        return std::nullopt;
    }

    CollisionState col(std::uint64_t tag)
    {
        auto it = data_.find(tag);
        if (it == data_.end()) {
            return CollisionState::Miss;
        }
        refresh(tag);
        for (const auto& e : it->second) {
            if (e.state == CollisionState::Collision) {
                return CollisionState::Collision;
            }
        }
        return CollisionState::NoCollision;
    }

    void update(std::uint64_t tag, StoreEntry e)
    {
        if (lines_ == 0) {
            return;
        }
        if (!data_.count(tag)) {
            if (data_.size() == lines_) {
                const std::uint64_t victim = order_.back();
                order_.pop_back();
                data_.erase(victim);
            }
            data_[tag];
            order_.push_front(tag);
        } else {
            refresh(tag);
        }
        auto& q = data_[tag];
        q.push_back(e);
        if (q.size() > 8) {
            q.pop_front();
        }
    }

    std::set<std::uint64_t> tags() const
    {
        std::set<std::uint64_t> out;
        for (const auto& [k, v] : data_) {
            out.insert(k);
        }
        return out;
    }

private:
    void refresh(std::uint64_t tag)
    {
        order_.remove(tag);
        order_.push_front(tag);
    }

    std::size_t lines_;
    std::map<std::uint64_t, std::deque<StoreEntry>> data_;
    std::list<std::uint64_t> order_;  // most recent first
};

std::set<std::uint64_t> resident_tags(const MortonStore& s)
{
    std::set<std::uint64_t> out;
    for (const auto& line : s.lines()) {
        if (line.valid) {
            out.insert(line.tag.code);
        }
    }
    return out;
}

} // namespace

TEST_CASE("geometry")
{
    MortonStore s(config());
    CHECK(s.line_count() == 512);
    CHECK(config().entries_per_line * 512 == 4096);
    CHECK(MortonStore(config(0)).line_count() == 0);
    StoreConfig bad = config();
    bad.entries_per_line = 7;
    CHECK_THROWS(MortonStore{bad});
}

TEST_CASE("morton_nn")
{
    MortonStore s(config());
    CHECK_FALSE(s.morton_nn({1, 1, 2}).has_value());

    s.morton_update({1, 1, 1}, CollisionState::NoCollision, NodeRef{5});
    CHECK(s.morton_nn({2, 2, 2}) == NodeRef{5});
    CHECK_FALSE(s.morton_nn({2, 2, 1}).has_value());    // node_t >= p.t
    CHECK_FALSE(s.morton_nn({2, 2, 0.5}).has_value());
    CHECK_FALSE(s.morton_nn({9, 9, 2}).has_value());    // other cell

    s.morton_update({1.5, 1, 2}, CollisionState::NoCollision, NodeRef{6});
    CHECK(s.morton_nn({2, 2, 3}) == NodeRef{6});        // newest time-valid
    CHECK(s.morton_nn({2, 2, 1.5}) == NodeRef{5});      // newest is too late
    s.morton_update({1.5, 1, 0.5}, CollisionState::Collision, kNoNode);
    CHECK(s.morton_nn({2, 2, 3}) == NodeRef{6});        // collision entries carry no node
}

TEST_CASE("morton_col aggregation")
{
    MortonStore s(config());
    CHECK(s.morton_col({1, 1, 1}) == CollisionState::Miss);
    s.morton_update({1, 1, 1}, CollisionState::NoCollision, NodeRef{1});
    CHECK(s.morton_col({2, 2, 2}) == CollisionState::NoCollision);
    s.morton_update({1, 1, 1.2}, CollisionState::Collision, kNoNode);
    CHECK(s.morton_col({2, 2, 2}) == CollisionState::Collision);
    s.morton_update({1, 1, 1.3}, CollisionState::NoCollision, NodeRef{2});
    CHECK(s.morton_col({2, 2, 2}) == CollisionState::Collision);

    // the collision ages out after eight newer entries
    for (std::uint32_t i = 0; i < 7; ++i) {
        s.morton_update({1, 1, 1.4}, CollisionState::NoCollision, NodeRef{10 + i});
    }
    CHECK(s.morton_col({2, 2, 2}) == CollisionState::NoCollision);
    CHECK_THROWS_AS(s.morton_update({1, 1, 1}, CollisionState::Miss, kNoNode), std::invalid_argument);
}

TEST_CASE("one update serves both queries")
{
    MortonStore s(config());
    s.morton_update(cell(3, 1.0), CollisionState::NoCollision, NodeRef{42});
    CHECK(s.morton_nn(cell(3, 2.0)) == NodeRef{42});
    CHECK(s.morton_col(cell(3, 2.0)) == CollisionState::NoCollision);
}

TEST_CASE("ring keeps the last eight")
{
    MortonStore s(config());
    for (std::uint32_t i = 0; i < 9; ++i) {
        s.morton_update({1, 1, 1}, CollisionState::NoCollision, NodeRef{i});
    }
    const auto slot = s.find_line(key_of({1, 1, 1}, config().quant));
    REQUIRE(slot.has_value());
    const StoreLine& line = s.lines()[*slot];
    CHECK(line.count == 8);
    CHECK(line.newest(0).node == NodeRef{8});
    CHECK(line.newest(7).node == NodeRef{1});
    CHECK(s.live_entries() == 8);
}

TEST_CASE("least recently referenced line is evicted")
{
    MortonStore s(config());
    const QuantConfig q = config().quant;
    for (int i = 0; i < 512; ++i) {
        s.morton_update(cell(i), CollisionState::NoCollision, NodeRef{static_cast<std::uint32_t>(i)});
    }
    CHECK(s.live_lines() == 512);
    CHECK(s.morton_col(cell(0)) == CollisionState::NoCollision);  // touch cell #1
    s.morton_update(cell(512), CollisionState::NoCollision, NodeRef{512});
    CHECK(s.live_lines() == 512);
    CHECK(s.counters().evictions == 1);
    CHECK(s.find_line(key_of(cell(0), q)).has_value());
    CHECK_FALSE(s.find_line(key_of(cell(1), q)).has_value());
    CHECK(s.find_line(key_of(cell(512), q)).has_value());

    // a read miss neither allocates nor evicts
    CHECK(s.morton_col(cell(900)) == CollisionState::Miss);
    CHECK(s.live_lines() == 512);
    CHECK(s.counters().evictions == 1);
}

TEST_CASE("matches a reference LRU model over 1e4 random ops")
{
    for (std::size_t capacity : {std::size_t{32768}, std::size_t{64 * 5}, std::size_t{0}}) {
        CAPTURE(capacity);
        const StoreConfig cfg = config(capacity);
        MortonStore s(cfg);
        ReferenceStore ref(cfg.lines());
        std::mt19937_64 gen(capacity + 1);
        std::uniform_int_distribution<int> cell_pick(0, capacity == 32768 ? 700 : 9);
        std::uniform_int_distribution<int> op_pick(0, 2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uint32_t next_node = 0;
        for (int i = 0; i < 10000; ++i) {
            const int c = cell_pick(gen);
            const SpaceTimePoint base = cell(c);
            // jitter inside the 4-unit cell
            const SpaceTimePoint p{base.x - 1 + 3.9 * u(gen), base.y - 1 + 3.9 * u(gen), 3.99 * u(gen)};
            const std::uint64_t tag = key_of(p, cfg.quant).code;
            switch (op_pick(gen)) {
            case 0:
                REQUIRE(s.morton_nn(p) == ref.nn(tag, p.t));
                break;
            case 1:
                REQUIRE(s.morton_col(p) == ref.col(tag));
                break;
            default: {
                const bool hit = u(gen) < 0.8;
                const StoreEntry e{hit ? CollisionState::NoCollision : CollisionState::Collision,
                                   hit ? NodeRef{next_node++} : kNoNode, p.t};
                s.morton_update(p, e.state, e.node);
                ref.update(tag, e);
            }
            }
            REQUIRE(s.live_lines() <= 512);
            REQUIRE(s.live_entries() <= 4096);
            if (i % 97 == 0) {
                REQUIRE(resident_tags(s) == ref.tags());
            }
        }
        CHECK(resident_tags(s) == ref.tags());
        CHECK(s.counters().lookups + s.counters().updates == 10000);
    }
}

TEST_CASE("capacity bound under heavy churn")
{
    MortonStore s(config());
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        s.morton_update({u(gen) * 200, u(gen) * 200, u(gen) * 100}, CollisionState::NoCollision,
                        NodeRef{static_cast<std::uint32_t>(i)});
    }
    CHECK(s.live_lines() == 512);
    CHECK(s.live_entries() <= 4096);
    // every resident line's tag indexes back to its own slot
    for (std::size_t i = 0; i < s.lines().size(); ++i) {
        REQUIRE(s.find_line(s.lines()[i].tag) == i);
    }
}

TEST_CASE("backends answer identically and differ only in cost")
{
    MortonStore sw(config(32768, StoreBackend::Software));
    MortonStore hw(config(32768, StoreBackend::Hardware));
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const SpaceTimePoint p{u(gen) * 60, u(gen) * 60, u(gen) * 30};
        const double r = u(gen);
        if (r < 0.33) {
            REQUIRE(sw.morton_nn(p) == hw.morton_nn(p));
        } else if (r < 0.66) {
            REQUIRE(sw.morton_col(p) == hw.morton_col(p));
        } else {
            const auto st = r < 0.9 ? CollisionState::NoCollision : CollisionState::Collision;
            sw.morton_update(p, st, NodeRef{static_cast<std::uint32_t>(i)});
            hw.morton_update(p, st, NodeRef{static_cast<std::uint32_t>(i)});
        }
    }
    CHECK(sw.op_counts() == hw.op_counts());
    const CostModel cm;
    const double n = static_cast<double>(sw.op_counts().store_ops());
    CHECK(sw.modeled_ops(cm) == doctest::Approx(40.0 * n));
    CHECK(sw.modeled_cycles(cm) == doctest::Approx(40.0 * n));
    CHECK(hw.modeled_ops(cm) == doctest::Approx(n));
    CHECK(hw.modeled_cycles(cm) == doctest::Approx(2.0 * n));
}

TEST_CASE("record_cost")
{
    const CostModel cm;
    MortonStore hw(config(32768, StoreBackend::Hardware));
    CHECK(hw.modeled_ops(cm) == 0.0);
    CHECK(hw.modeled_cycles(cm) == 0.0);
    hw.record_cost(StoreOp::Lookup);
    CHECK(hw.modeled_ops(cm) == 1.0);
    CHECK(hw.modeled_cycles(cm) == 2.0);

    MortonStore sw(config());
    sw.record_cost(StoreOp::Lookup);
    CHECK(sw.modeled_ops(cm) == 40.0);
    sw.record_cost(StoreOp::Update);
    CHECK(sw.op_counts()[OpKind::StoreUpdate] == 1);
    CHECK(sw.modeled_ops(cm) == 80.0);
}
