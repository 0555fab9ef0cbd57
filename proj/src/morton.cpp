#include "mortonrrt/morton.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mrrt {

void QuantConfig::validate() const
{
    if (scale == 0 || !std::has_single_bit(scale)) {
        throw std::invalid_argument("quantization scale must be a power of two");
    }
    if (mask_bits > kMaxMaskBits) {
        throw std::invalid_argument("mask bits must be in [0, 63]");
    }
}

void QuantConfig::validate(double edge_length, int timesteps) const
{
    validate();
    const double extent = std::max(edge_length, static_cast<double>(timesteps));
    if (static_cast<double>(scale) * extent >= static_cast<double>(kMortonCoordLimit)) {
        throw std::invalid_argument("scale * max(l, T) = " + std::to_string(scale * extent) +
                                    " does not fit in 21 bits");
    }
}

double QuantConfig::cell_side() const
{
    return std::ldexp(1.0, static_cast<int>(mask_bits / 3)) / static_cast<double>(scale);
}

MortonKey encode3(std::uint32_t x, std::uint32_t y, std::uint32_t t)
{
    if (x >= kMortonCoordLimit || y >= kMortonCoordLimit || t >= kMortonCoordLimit) {
        throw std::out_of_range("encode3: coordinate exceeds 21 bits");
    }
    return MortonKey{detail::spread_bits3(x) | (detail::spread_bits3(y) << 1) |
                     (detail::spread_bits3(t) << 2)};
}

GridCoord decode3(MortonKey key)
{
    return {detail::compact_bits3(key.code), detail::compact_bits3(key.code >> 1),
            detail::compact_bits3(key.code >> 2)};
}

namespace {

std::uint32_t quantize_axis(double v, std::uint32_t scale, const char* axis)
{
    const double q = std::floor(v * static_cast<double>(scale));
    if (!(q >= 0.0) || q >= static_cast<double>(kMortonCoordLimit)) {
        throw std::out_of_range(std::string("quantize: ") + axis + " out of 21-bit range");
    }
    return static_cast<std::uint32_t>(q);
}

} // namespace

GridCoord quantize(const SpaceTimePoint& p, const QuantConfig& cfg)
{
    return {quantize_axis(p.x, cfg.scale, "x"), quantize_axis(p.y, cfg.scale, "y"),
            quantize_axis(p.t, cfg.scale, "t")};
}

MortonKey key_of(const SpaceTimePoint& p, const QuantConfig& cfg)
{
    return mask(encode3(quantize(p, cfg)), cfg.mask_bits);
}

} // namespace mrrt
