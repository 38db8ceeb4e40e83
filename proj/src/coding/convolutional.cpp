#include "pnm/coding.hpp"
#include "pnm/errors.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <limits>

namespace pnm::coding
{
namespace
{
constexpr int kStates = 1 << CodeParams::kMemory;

// Register layout: bit 6 is the current input, bits 5..0 the previous six inputs (most recent first).
inline unsigned char parity(unsigned v)
{
    return static_cast< unsigned char >(std::popcount(v) & 1);
}

struct Trellis
{
    std::array< std::array< unsigned char, 2 >, kStates * 2 > out{}; // [state * 2 + input] -> (c0, c1)

    Trellis()
    {
        for (int s = 0; s < kStates; ++s)
            for (int u = 0; u < 2; ++u)
            {
                const unsigned reg = (static_cast< unsigned >(u) << CodeParams::kMemory) | static_cast< unsigned >(s);
                out[static_cast< size_t >(s * 2 + u)] = {parity(reg & CodeParams::kG0), parity(reg & CodeParams::kG1)};
            }
    }
};

const Trellis& trellis()
{
    static const Trellis t;
    return t;
}

inline int next_state(int s, int u)
{
    return ((u << CodeParams::kMemory) | s) >> 1;
}
} // namespace

int CodeParams::info_length(int n_coded)
{
    if (n_coded % 2 != 0 or n_coded / 2 <= kTailBits)
        throw FramingError("coding: coded length cannot hold a terminated codeword");
    return n_coded / 2 - kTailBits;
}

Bits conv_encode(std::span< const unsigned char > bits)
{
    const auto& t = trellis();
    Bits        out;
    out.reserve(2 * (bits.size() + CodeParams::kTailBits));
    int state = 0;
    auto push = [&](int u) {
        const auto& o = t.out[static_cast< size_t >(state * 2 + u)];
        out.push_back(o[0]);
        out.push_back(o[1]);
        state = next_state(state, u);
    };
    for (const unsigned char b : bits)
        push(b & 1);
    for (int i = 0; i < CodeParams::kTailBits; ++i)
        push(0);
    return out;
}

Bits viterbi_decode(std::span< const unsigned char > coded)
{
    const int n_info = CodeParams::info_length(static_cast< int >(coded.size()));
    const int steps  = n_info + CodeParams::kTailBits;
    const auto& t    = trellis();

    constexpr int kInf = std::numeric_limits< int >::max() / 2;
    std::array< int, kStates > metric;
    std::array< int, kStates > next;
    metric.fill(kInf);
    metric[0] = 0;

    // decision[step][state]: predecessor's dropped bit (the oldest register bit).
    std::vector< std::array< unsigned char, kStates > > decision(static_cast< size_t >(steps));

    for (int i = 0; i < steps; ++i)
    {
        const unsigned char r0 = coded[static_cast< size_t >(2 * i)] & 1;
        const unsigned char r1 = coded[static_cast< size_t >(2 * i + 1)] & 1;
        next.fill(kInf);
        auto& dec = decision[static_cast< size_t >(i)];
        for (int s = 0; s < kStates; ++s)
        {
            // Two predecessors p = ((s << 1) | b) & mask with input u = s >> 5.
            const int u = s >> (CodeParams::kMemory - 1);
            for (int b = 0; b < 2; ++b)
            {
                const int p = ((s << 1) | b) & (kStates - 1);
                if (metric[static_cast< size_t >(p)] >= kInf)
                    continue;
                const auto& o = t.out[static_cast< size_t >(p * 2 + u)];
                const int   m = metric[static_cast< size_t >(p)] + (o[0] != r0) + (o[1] != r1);
                if (m < next[static_cast< size_t >(s)])
                {
                    next[static_cast< size_t >(s)] = m;
                    dec[static_cast< size_t >(s)]  = static_cast< unsigned char >(b);
                }
            }
        }
        metric = next;
    }

    // Terminated: trace back from state 0.
    Bits out(static_cast< size_t >(steps));
    int  s = 0;
    for (int i = steps - 1; i >= 0; --i)
    {
        out[static_cast< size_t >(i)] = static_cast< unsigned char >(s >> (CodeParams::kMemory - 1));
        s = ((s << 1) | decision[static_cast< size_t >(i)][static_cast< size_t >(s)]) & (kStates - 1);
    }
    out.resize(static_cast< size_t >(n_info));
    return out;
}
} // namespace pnm::coding
