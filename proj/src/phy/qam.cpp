#include "pnm/errors.hpp"
#include "pnm/phy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pnm::phy
{
namespace
{
struct Axis
{
    int    bits;   // bits per axis
    int    levels; // 2^bits
    double scale;  // amplitude of level 1
};

Axis axis_for(int bits_per_symbol)
{
    if (bits_per_symbol != 2 and bits_per_symbol != 4 and bits_per_symbol != 6)
        throw ConfigError("qam: bits per symbol must be 2, 4 or 6, got " + std::to_string(bits_per_symbol));
    const int    b      = bits_per_symbol / 2;
    const int    levels = 1 << b;
    // E|S|^2 = 2 (levels^2 - 1) / 3 before scaling.
    const double scale = 1.0 / std::sqrt(2.0 * (levels * levels - 1) / 3.0);
    return {b, levels, scale};
}

int gray_to_binary(int g)
{
    int b = 0;
    for (; g; g >>= 1)
        b ^= g;
    return b;
}

int binary_to_gray(int b)
{
    return b ^ (b >> 1);
}

double map_axis(const unsigned char* bits, const Axis& ax)
{
    int g = 0;
    for (int i = 0; i < ax.bits; ++i)
        g = (g << 1) | (bits[i] & 1);
    const int idx = gray_to_binary(g);
    return ax.scale * static_cast< double >((ax.levels - 1) - 2 * idx);
}

int slice_axis(double v, const Axis& ax)
{
    const double idx = std::round(((ax.levels - 1) - v / ax.scale) / 2.0);
    return std::clamp(static_cast< int >(idx), 0, ax.levels - 1);
}

double level_of(int idx, const Axis& ax)
{
    return ax.scale * static_cast< double >((ax.levels - 1) - 2 * idx);
}

void demap_axis(int idx, const Axis& ax, unsigned char* out)
{
    const int g = binary_to_gray(idx);
    for (int i = 0; i < ax.bits; ++i)
        out[i] = static_cast< unsigned char >((g >> (ax.bits - 1 - i)) & 1);
}
} // namespace

CVec qam_map(std::span< const unsigned char > bits, int bits_per_symbol)
{
    const Axis ax = axis_for(bits_per_symbol);
    if (bits.size() % static_cast< size_t >(bits_per_symbol) != 0)
        throw FramingError("qam_map: bit count is not a multiple of bits per symbol");
    const auto n = static_cast< Eigen::Index >(bits.size() / static_cast< size_t >(bits_per_symbol));
    CVec       out(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const unsigned char* b = bits.data() + i * bits_per_symbol;
        out[i]                 = {map_axis(b, ax), map_axis(b + ax.bits, ax)};
    }
    return out;
}

Bits qam_hard_demap(const CVec& symbols, int bits_per_symbol)
{
    const Axis ax = axis_for(bits_per_symbol);
    Bits       out(static_cast< size_t >(symbols.size() * bits_per_symbol));
    for (Eigen::Index i = 0; i < symbols.size(); ++i)
    {
        unsigned char* b = out.data() + i * bits_per_symbol;
        demap_axis(slice_axis(symbols[i].real(), ax), ax, b);
        demap_axis(slice_axis(symbols[i].imag(), ax), ax, b + ax.bits);
    }
    return out;
}

CVec qam_slice(const CVec& symbols, int bits_per_symbol)
{
    const Axis ax = axis_for(bits_per_symbol);
    CVec       out(symbols.size());
    for (Eigen::Index i = 0; i < symbols.size(); ++i)
        out[i] = {level_of(slice_axis(symbols[i].real(), ax), ax), level_of(slice_axis(symbols[i].imag(), ax), ax)};
    return out;
}

NoiseModel NoiseModel::from_ebn0(double ebn0_db, int bits_per_symbol, double code_rate)
{
    if (not(code_rate > 0.0) or bits_per_symbol < 1)
        throw ConfigError("noise: invalid modulation order or code rate");
    return NoiseModel{1.0 / (bits_per_symbol * code_rate * std::pow(10.0, ebn0_db / 10.0))};
}
} // namespace pnm::phy
