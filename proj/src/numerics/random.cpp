#include "pnm/numerics/random.hpp"

#include "pnm/errors.hpp"

#include <cmath>

namespace pnm::numerics
{
namespace
{
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
} // namespace

std::uint64_t derive_seed(std::initializer_list< std::uint64_t > words) noexcept
{
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (const auto w : words)
        h = splitmix64(h ^ splitmix64(w));
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_{seed}, stream_id_{stream_id}, engine_{derive_seed({seed, stream_id})}
{}

RngStream RngStream::substream(std::uint64_t tag) const
{
    return RngStream{derive_seed({seed_, stream_id_}), tag};
}

double RngStream::uniform()
{
    // 53 random mantissa bits.
    return static_cast< double >(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian(double sigma)
{
    return sigma * normal_(engine_);
}

cd RngStream::complex_gaussian(double variance)
{
    const double s  = std::sqrt(variance / 2.0);
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {s * re, s * im};
}

unsigned char RngStream::bit()
{
    return static_cast< unsigned char >(engine_() >> 63);
}

RVec gaussian_samples(RngStream& rng, long n, double sigma)
{
    if (sigma < 0.0 or not std::isfinite(sigma))
        throw ConfigError("gaussian_samples: sigma must be finite and >= 0");
    RVec out(n);
    for (long i = 0; i < n; ++i)
        out[i] = rng.gaussian(sigma);
    return out;
}

CVec complex_gaussian_samples(RngStream& rng, long n, double variance)
{
    if (variance < 0.0 or not std::isfinite(variance))
        throw ConfigError("complex_gaussian_samples: variance must be finite and >= 0");
    CVec out(n);
    for (long i = 0; i < n; ++i)
        out[i] = rng.complex_gaussian(variance);
    return out;
}

Bits random_bits(RngStream& rng, long n)
{
    Bits out(static_cast< size_t >(n));
    for (auto& b : out)
        b = rng.bit();
    return out;
}
} // namespace pnm::numerics
