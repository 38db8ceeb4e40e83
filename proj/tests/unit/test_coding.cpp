#include <doctest.h>

#include "pnm/coding.hpp"
#include "pnm/errors.hpp"
#include "pnm/numerics/random.hpp"

#include <algorithm>
#include <set>

using namespace pnm;
using namespace pnm::coding;

namespace
{
// Direct convolution c_g[t] = xor_d g[d] u[t - d], tap d = 0 being the generator's MSB.
Bits reference_encode(const Bits& u)
{
    const int g0[7] = {1, 0, 1, 1, 0, 1, 1}; // 133
    const int g1[7] = {1, 1, 1, 1, 0, 0, 1}; // 171
    Bits      padded = u;
    padded.resize(u.size() + 6, 0);
    Bits out;
    for (size_t t = 0; t < padded.size(); ++t)
    {
        int c0 = 0, c1 = 0;
        for (size_t d = 0; d < 7 and d <= t; ++d)
        {
            c0 ^= g0[d] & padded[t - d];
            c1 ^= g1[d] & padded[t - d];
        }
        out.push_back(static_cast< unsigned char >(c0));
        out.push_back(static_cast< unsigned char >(c1));
    }
    return out;
}
} // namespace

TEST_SUITE("coding")
{
    TEST_CASE("encoder matches the reference convolution")
    {
        CHECK(conv_encode(Bits(10, 0)) == Bits(32, 0));
        const Bits impulse{1};
        CHECK(conv_encode(impulse) == Bits{1, 1, 0, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1, 1});

        numerics::RngStream rng(1, 4);
        for (int r = 0; r < 20; ++r)
        {
            const Bits u = numerics::random_bits(rng, 50 + r);
            CHECK(conv_encode(u) == reference_encode(u));
        }
        CHECK(CodeParams::coded_length(2234) == 4480);
        CHECK(CodeParams::info_length(4480) == 2234);
        CHECK_THROWS_AS((void)CodeParams::info_length(4481), FramingError);
        CHECK_THROWS_AS((void)CodeParams::info_length(12), FramingError);
    }

    TEST_CASE("viterbi round trip and single errors")
    {
        numerics::RngStream rng(2, 4);
        for (int r = 0; r < 100; ++r)
        {
            const Bits u = numerics::random_bits(rng, 24);
            const Bits c = conv_encode(u);
            REQUIRE(viterbi_decode(c) == u);
            for (size_t i = 0; i < c.size(); ++i)
            {
                Bits e = c;
                e[i] ^= 1;
                CHECK(viterbi_decode(e) == u);
            }
        }
        CHECK_THROWS_AS(viterbi_decode(Bits(13, 0)), FramingError);
    }

    TEST_CASE("binary symmetric channel")
    {
        numerics::RngStream rng(3, 4);
        long                errors = 0, bits = 0, raw = 0;
        for (int r = 0; r < 50; ++r)
        {
            const Bits u = numerics::random_bits(rng, 2000);
            Bits       c = conv_encode(u);
            for (auto& b : c)
                if (rng.uniform() < 0.01)
                {
                    b ^= 1;
                    ++raw;
                }
            const Bits d = viterbi_decode(c);
            for (size_t i = 0; i < u.size(); ++i)
                errors += d[i] != u[i];
            bits += static_cast< long >(u.size());
        }
        CHECK(raw > 1500);
        // free distance 10 at p = 0.01 leaves roughly 1e-5
        CHECK(static_cast< double >(errors) / static_cast< double >(bits) < 1e-3);
    }

    TEST_CASE("interleaver round trip and identity")
    {
        numerics::RngStream rng(4, 4);
        const Bits          x = numerics::random_bits(rng, 20 * 224);
        for (const int shift : {0, 1, 12, 223})
        {
            const Bits y = interleave(x, 20, 224, shift);
            CHECK(y != x);
            CHECK(deinterleave(y, 20, 224, shift) == x);
        }
        CHECK(interleave(x, 1, static_cast< int >(x.size())) == x);
        CHECK_THROWS_AS(interleave(x, 20, 200), FramingError);
        CHECK_THROWS_AS(interleave(x, 0, 224), ConfigError);
    }

    TEST_CASE("burst spreading")
    {
        const int span = 20, row = 224, m = 4;
        const int shift = frame_row_shift(56, m, span);
        CHECK(shift == 12);

        // Burst of 20 errors in the channel stream, inside one OFDM symbol.
        Bits marks(span * row, 0);
        for (int i = 0; i < 20; ++i)
            marks[static_cast< size_t >(5 * row + 100 + i)] = 1;
        const Bits d = deinterleave(marks, span, row, shift);
        std::vector< int > pos;
        for (size_t i = 0; i < d.size(); ++i)
            if (d[i])
                pos.push_back(static_cast< int >(i));
        REQUIRE(pos.size() == 20);
        for (size_t i = 1; i < pos.size(); ++i)
            CHECK(pos[i] - pos[i - 1] >= span);

        // 20 consecutive coded bits reach 20 different symbols and 20 different subcarriers.
        Bits probe(span * row, 0);
        for (int i = 0; i < 20; ++i)
            probe[static_cast< size_t >(777 + i)] = 1;
        const Bits          y = interleave(probe, span, row, shift);
        std::set< int >     rows, carriers;
        for (size_t i = 0; i < y.size(); ++i)
            if (y[i])
            {
                rows.insert(static_cast< int >(i) / row);
                carriers.insert((static_cast< int >(i) % row) / m);
            }
        CHECK(rows.size() == 20);
        CHECK(carriers.size() == 20);
    }
}
