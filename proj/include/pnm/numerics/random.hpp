#ifndef PNM_NUMERICS_RANDOM_HPP
#define PNM_NUMERICS_RANDOM_HPP

#include "pnm/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pnm::numerics
{
/// Mix a list of words into one 64-bit seed (splitmix64 finalizer chained over the inputs).
std::uint64_t derive_seed(std::initializer_list< std::uint64_t > words) noexcept;

/// Deterministic random source identified by (seed, stream id).
///
/// Distinct stream ids under one master seed give statistically independent sequences; the
/// same pair always reproduces the same sequence. Not thread-safe: one instance per worker.
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Child stream for a sub-task, independent of this stream's state.
    [[nodiscard]] RngStream substream(std::uint64_t tag) const;

    double uniform();                      ///< U[0, 1)
    double gaussian(double sigma = 1.0);   ///< N(0, sigma^2)
    cd     complex_gaussian(double variance); ///< circular CN(0, variance)
    unsigned char bit();

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t                      seed_;
    std::uint64_t                      stream_id_;
    std::mt19937_64                    engine_;
    std::normal_distribution< double > normal_{0.0, 1.0};
};

/// n i.i.d. N(0, sigma^2) samples. Throws ConfigError for negative sigma.
RVec gaussian_samples(RngStream& rng, long n, double sigma);

/// n i.i.d. CN(0, variance) samples.
CVec complex_gaussian_samples(RngStream& rng, long n, double variance);

Bits random_bits(RngStream& rng, long n);
} // namespace pnm::numerics

#endif // PNM_NUMERICS_RANDOM_HPP
