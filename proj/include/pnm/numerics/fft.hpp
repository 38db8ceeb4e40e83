#ifndef PNM_NUMERICS_FFT_HPP
#define PNM_NUMERICS_FFT_HPP

#include "pnm/errors.hpp"
#include "pnm/types.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace pnm::numerics
{
constexpr bool is_power_of_two(long n) noexcept
{
    return n > 0 and (n & (n - 1)) == 0;
}

/// Precomputed bit-reversal table and twiddles for one radix-2 size.
template < typename Scalar >
class FftPlan
{
public:
    explicit FftPlan(int n) : n_{n}
    {
        if (not is_power_of_two(n))
            throw ConfigError("fft: length " + std::to_string(n) + " is not a power of two");
        bitrev_.resize(static_cast< size_t >(n));
        int bits = 0;
        while ((1 << bits) < n)
            ++bits;
        for (int i = 0; i < n; ++i)
        {
            int r = 0;
            for (int b = 0; b < bits; ++b)
                r |= ((i >> b) & 1) << (bits - 1 - b);
            bitrev_[static_cast< size_t >(i)] = r;
        }
        twiddle_.resize(static_cast< size_t >(n / 2));
        for (int k = 0; k < n / 2; ++k)
        {
            const long double angle = -2.0L * std::numbers::pi_v< long double > * k / n;
            twiddle_[static_cast< size_t >(k)] =
                std::complex< Scalar >(static_cast< Scalar >(std::cos(angle)), static_cast< Scalar >(std::sin(angle)));
        }
        scale_ = static_cast< Scalar >(1.0L / std::sqrt(static_cast< long double >(n)));
    }

    [[nodiscard]] int size() const noexcept { return n_; }

    /// Unitary in-place transform of n contiguous samples.
    void execute(std::complex< Scalar >* data, bool inverse) const
    {
        for (int i = 0; i < n_; ++i)
        {
            const int j = bitrev_[static_cast< size_t >(i)];
            if (i < j)
                std::swap(data[i], data[j]);
        }
        for (int half = 1; half < n_; half <<= 1)
        {
            const int stride = n_ / (2 * half);
            for (int start = 0; start < n_; start += 2 * half)
            {
                for (int k = 0; k < half; ++k)
                {
                    std::complex< Scalar > w = twiddle_[static_cast< size_t >(k * stride)];
                    if (inverse)
                        w = std::conj(w);
                    const std::complex< Scalar > t = w * data[start + k + half];
                    data[start + k + half]         = data[start + k] - t;
                    data[start + k] += t;
                }
            }
        }
        for (int i = 0; i < n_; ++i)
            data[i] *= scale_;
    }

private:
    int                                 n_;
    std::vector< int >                  bitrev_;
    std::vector< std::complex< Scalar > > twiddle_;
    Scalar                              scale_;
};

/// Per-thread plan cache; plans are immutable once built.
template < typename Scalar >
const FftPlan< Scalar >& fft_plan(int n)
{
    thread_local std::unordered_map< int, std::unique_ptr< FftPlan< Scalar > > > cache;
    auto& slot = cache[n];
    if (not slot)
        slot = std::make_unique< FftPlan< Scalar > >(n);
    return *slot;
}

/// In-place unitary FFT (1/sqrt(N) both directions) of a contiguous complex vector view.
template < typename Scalar >
void fft_inplace(Eigen::Ref< ComplexVector< Scalar > > x, bool inverse = false)
{
    fft_plan< Scalar >(static_cast< int >(x.size())).execute(x.data(), inverse);
}

template < typename Scalar >
ComplexVector< Scalar > fft(const ComplexVector< Scalar >& x, bool inverse = false)
{
    ComplexVector< Scalar > out = x;
    fft_inplace< Scalar >(out, inverse);
    return out;
}

template < typename Scalar >
ComplexVector< Scalar > ifft(const ComplexVector< Scalar >& x)
{
    return fft< Scalar >(x, true);
}

extern template class FftPlan< float >;
extern template class FftPlan< double >;
} // namespace pnm::numerics

#endif // PNM_NUMERICS_FFT_HPP
