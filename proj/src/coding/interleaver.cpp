#include "pnm/coding.hpp"
#include "pnm/errors.hpp"

#include <string>

namespace pnm::coding
{
namespace
{
void check(size_t n, int span, int bits_per_row)
{
    if (span < 1 or bits_per_row < 1)
        throw ConfigError("interleaver: span and row length must be positive");
    if (n != static_cast< size_t >(span) * static_cast< size_t >(bits_per_row))
        throw FramingError("interleaver: expected " + std::to_string(span * bits_per_row) + " bits, got " +
                           std::to_string(n));
}

size_t target(size_t i, int span, int bits_per_row, int row_shift)
{
    const size_t row = i % static_cast< size_t >(span);
    const size_t col = (i / static_cast< size_t >(span) + row * static_cast< size_t >(row_shift)) %
                       static_cast< size_t >(bits_per_row);
    return row * static_cast< size_t >(bits_per_row) + col;
}
} // namespace

Bits interleave(std::span< const unsigned char > bits, int span, int bits_per_row, int row_shift)
{
    check(bits.size(), span, bits_per_row);
    Bits out(bits.size());
    for (size_t i = 0; i < bits.size(); ++i)
        out[target(i, span, bits_per_row, row_shift)] = bits[i];
    return out;
}

Bits deinterleave(std::span< const unsigned char > bits, int span, int bits_per_row, int row_shift)
{
    check(bits.size(), span, bits_per_row);
    Bits out(bits.size());
    for (size_t i = 0; i < bits.size(); ++i)
        out[i] = bits[target(i, span, bits_per_row, row_shift)];
    return out;
}

int frame_row_shift(int n_data, int bits_per_symbol, int span)
{
    if (n_data < 1 or bits_per_symbol < 1 or span < 1)
        throw ConfigError("interleaver: invalid frame layout");
    return bits_per_symbol * ((n_data + span - 1) / span);
}
} // namespace pnm::coding
