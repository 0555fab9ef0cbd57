#include "mortonrrt/memostore.hpp"

#include <stdexcept>

namespace mrrt {

void StoreConfig::validate() const
{
    if (entries_per_line == 0 || entries_per_line * 8 != line_bytes) {
        throw std::invalid_argument("store: entries_per_line * 8 must equal line_bytes");
    }
    quant.validate();
}

MortonStore::MortonStore(StoreConfig cfg)
    : cfg_(cfg)
{
    cfg_.validate();
    const std::size_t n = cfg_.lines();
    lines_.resize(n);
    for (auto& line : lines_) {
        line.ring.resize(cfg_.entries_per_line);
    }
    prev_.assign(n, kNil);
    next_.assign(n, kNil);
    index_.reserve(n * 2);
}

void MortonStore::record_cost(StoreOp op)
{
    if (op == StoreOp::Lookup) {
        ++ops_[OpKind::StoreLookup];
        ++counters_.lookups;
    } else {
        ++ops_[OpKind::StoreUpdate];
        ++counters_.updates;
    }
}

std::optional<std::size_t> MortonStore::find_line(MortonKey tag) const
{
    auto it = index_.find(tag.code);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t MortonStore::live_entries() const
{
    std::size_t total = 0;
    for (const auto& line : lines_) {
        if (line.valid) {
            total += line.count;
        }
    }
    return total;
}

void MortonStore::unlink(std::uint32_t slot)
{
    const std::uint32_t p = prev_[slot];
    const std::uint32_t n = next_[slot];
    if (p != kNil) {
        next_[p] = n;
    } else {
        head_ = n;
    }
    if (n != kNil) {
        prev_[n] = p;
    } else {
        tail_ = p;
    }
    prev_[slot] = next_[slot] = kNil;
}

void MortonStore::push_front(std::uint32_t slot)
{
    prev_[slot] = kNil;
    next_[slot] = head_;
    if (head_ != kNil) {
        prev_[head_] = slot;
    }
    head_ = slot;
    if (tail_ == kNil) {
        tail_ = slot;
    }
}

void MortonStore::touch(std::uint32_t slot)
{
    lines_[slot].last_ref = ++clock_;
    if (head_ != slot) {
        unlink(slot);
        push_front(slot);
    }
}

StoreLine* MortonStore::lookup(MortonKey tag)
{
    auto it = index_.find(tag.code);
    if (it == index_.end()) {
        return nullptr;
    }
    ++counters_.tag_hits;
    touch(it->second);
    return &lines_[it->second];
}

std::uint32_t MortonStore::allocate(MortonKey tag)
{
    std::uint32_t slot;
    if (next_free_ < lines_.size()) {
        slot = next_free_++;
    } else {
        slot = tail_;
        index_.erase(lines_[slot].tag.code);
        unlink(slot);
        ++counters_.evictions;
    }
    StoreLine& line = lines_[slot];
    line.tag = tag;
    line.head = 0;
    line.count = 0;
    line.valid = true;
    index_.emplace(tag.code, slot);
    push_front(slot);
    line.last_ref = ++clock_;
    return slot;
}

std::optional<NodeRef> MortonStore::morton_nn(const SpaceTimePoint& p)
{
    record_cost(StoreOp::Lookup);
    if (lines_.empty()) {
        return std::nullopt;
    }
    StoreLine* line = lookup(key_of(p, cfg_.quant));
    if (!line) {
        return std::nullopt;
    }
    for (std::uint32_t i = 0; i < line->count; ++i) {
        const StoreEntry& e = line->newest(i);
        if (e.state == CollisionState::NoCollision && e.node_t < p.t) {
            return e.node;
        }
    }
    return std::nullopt;
}

CollisionState MortonStore::morton_col(const SpaceTimePoint& p)
{
    record_cost(StoreOp::Lookup);
    if (lines_.empty()) {
        return CollisionState::Miss;
    }
    StoreLine* line = lookup(key_of(p, cfg_.quant));
    if (!line) {
        return CollisionState::Miss;
    }
    for (std::uint32_t i = 0; i < line->count; ++i) {
        if (line->ring[i].state == CollisionState::Collision) {
            return CollisionState::Collision;
        }
    }
    return CollisionState::NoCollision;
}

void MortonStore::morton_update(const SpaceTimePoint& p, CollisionState state, NodeRef r)
{
    if (state == CollisionState::Miss) {
        throw std::invalid_argument("morton_update: MISS is not a storable state");
    }
    record_cost(StoreOp::Update);
    if (lines_.empty()) {
        return;
    }
    const MortonKey tag = key_of(p, cfg_.quant);
    std::uint32_t slot;
    if (auto it = index_.find(tag.code); it != index_.end()) {
        slot = it->second;
        touch(slot);
    } else {
        slot = allocate(tag);
    }
    StoreLine& line = lines_[slot];
    const auto cap = static_cast<std::uint32_t>(line.ring.size());
    line.ring[line.head] = StoreEntry{state, r, p.t};
    line.head = (line.head + 1) % cap;
    if (line.count < cap) {
        ++line.count;
    }
}

} // namespace mrrt
