/*! @file
 * @brief 3D Morton (Z-order) keys over (x, y, t) with k-bit masking
 *
 * Each coordinate contributes 21 bits; bit b of x lands at code bit 3b, y at
 * 3b+1 and t at 3b+2. Bit 63 of a key is always clear.
 *
 * Masking the k least significant bits of a key groups points into cells:
 * when 3 divides k, two points share a masked key exactly when each of their
 * quantized coordinates agrees after division by 2^(k/3).
 */
#pragma once

#include "mortonrrt/scenario.hpp"

#include <array>
#include <compare>
#include <cstdint>

namespace mrrt {

inline constexpr unsigned kMortonCoordBits = 21;
inline constexpr std::uint32_t kMortonCoordLimit = 1u << kMortonCoordBits;
inline constexpr unsigned kMaxMaskBits = 63;

struct MortonKey
{
    std::uint64_t code = 0;

    friend auto operator<=>(const MortonKey&, const MortonKey&) = default;
};

using GridCoord = std::array<std::uint32_t, 3>;

/// Fixed-point quantization of continuous coordinates plus the mask width.
struct QuantConfig
{
    std::uint32_t scale = 16;  ///< subunits per map unit, power of two
    unsigned mask_bits = 18;   ///< k

    /// Throws std::invalid_argument unless scale is a power of two, k <= 63 and
    /// scale * max(l, T) fits in 21 bits.
    void validate(double edge_length, int timesteps) const;
    void validate() const;

    /// Map units covered by one masked cell along each axis (3 | k).
    double cell_side() const;
};

namespace detail {

/// Spread the low 21 bits of v so that bit b moves to bit 3b.
constexpr std::uint64_t spread_bits3(std::uint64_t v)
{
    v &= 0x1fffffULL;
    v = (v | (v << 32)) & 0x1f00000000ffffULL;
    v = (v | (v << 16)) & 0x1f0000ff0000ffULL;
    v = (v | (v << 8)) & 0x100f00f00f00f00fULL;
    v = (v | (v << 4)) & 0x10c30c30c30c30c3ULL;
    v = (v | (v << 2)) & 0x1249249249249249ULL;
    return v;
}

/// Inverse of spread_bits3.
constexpr std::uint32_t compact_bits3(std::uint64_t v)
{
    v &= 0x1249249249249249ULL;
    v = (v ^ (v >> 2)) & 0x10c30c30c30c30c3ULL;
    v = (v ^ (v >> 4)) & 0x100f00f00f00f00fULL;
    v = (v ^ (v >> 8)) & 0x1f0000ff0000ffULL;
    v = (v ^ (v >> 16)) & 0x1f00000000ffffULL;
    v = (v ^ (v >> 32)) & 0x1fffffULL;
    return static_cast<std::uint32_t>(v);
}

} // namespace detail

/// Throws std::out_of_range if any input is >= 2^21.
MortonKey encode3(std::uint32_t x, std::uint32_t y, std::uint32_t t);
inline MortonKey encode3(const GridCoord& c) { return encode3(c[0], c[1], c[2]); }

GridCoord decode3(MortonKey key);

/// Clears the k least significant bits. Requires k <= 63.
constexpr MortonKey mask(MortonKey key, unsigned k)
{
    if (k == 0) {
        return key;
    }
    return MortonKey{key.code & (~std::uint64_t{0} << k)};
}

/// floor(coord * scale) per axis; throws std::out_of_range if a coordinate is
/// negative or does not fit in 21 bits.
GridCoord quantize(const SpaceTimePoint& p, const QuantConfig& cfg);

/// Masked key of a point: quantize, interleave, clear k low bits.
MortonKey key_of(const SpaceTimePoint& p, const QuantConfig& cfg);

} // namespace mrrt
