#ifndef PNM_CHANNEL_HPP
#define PNM_CHANNEL_HPP

#include "pnm/numerics/random.hpp"
#include "pnm/types.hpp"

#include <optional>
#include <vector>

namespace pnm::channel
{
inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Wide-sense stationary multipath fading: exponential delay density, Jakes Doppler spectrum.
struct ChannelParams
{
    double f_c       = 5e9;
    double f_s       = 25e6;
    double tau_rms   = 3.0;   ///< RMS delay spread in samples (120 ns at 25 MHz)
    double speed_mps = 7.0 / 3.6;
    int    n_taps    = 10;    ///< L: number of paths and maximum delay in samples
    int    n_fft     = 64;
    int    n_cp      = 16;
    /// Overrides the speed-derived normalized Doppler when set.
    std::optional< double > doppler_override;
    /// Tap-delay line with delays 0..L-1 and deterministic exponential amplitudes instead of
    /// random continuous delays. Its covariance is a Riemann sum of R_f, not R_f itself.
    bool integer_delays = false;

    /// Symbol duration T = (N + Ncp) / f_s.
    [[nodiscard]] double symbol_duration() const { return (n_fft + n_cp) / f_s; }
    /// f_max^D = (v f_c / c) T, maximum Doppler normalized to the symbol rate.
    [[nodiscard]] double doppler_norm() const;
    void                 validate() const;
};

/// Reference configuration: 5 GHz carrier, 25 MHz sampling, 120 ns RMS delay, 7 km/h, 10 paths.
ChannelParams table2_params();

struct Path
{
    double amplitude = 0.0;
    double phase     = 0.0; ///< rad
    double doppler   = 0.0; ///< cycles per OFDM symbol
    double delay     = 0.0; ///< samples
};

/// One channel draw over a frame; constant within each OFDM symbol.
struct ChannelRealization
{
    int                  n_fft = 0;
    std::vector< Path >  paths;
    std::vector< CVec >  freq_response; ///< H_m(k) per symbol m

    [[nodiscard]] int         n_symbols() const { return static_cast< int >(freq_response.size()); }
    [[nodiscard]] const CVec& at(int m) const { return freq_response[static_cast< size_t >(m)]; }
};

/// Frequency response sum_i a_i exp(j(phi_i + 2 pi f_i m - 2 pi k tau_i / N)) for symbol m.
CVec path_response(const std::vector< Path >& paths, int n_fft, int m);

/// Draw L equal-power paths with i.i.d. truncated-exponential delays, uniform phases and
/// Doppler f_max cos(xi), xi uniform.
std::vector< Path > draw_paths(const ChannelParams& params, numerics::RngStream& rng);

ChannelRealization gen_channel(const ChannelParams& params, int n_symbols, numerics::RngStream& rng);

/// Flat unit channel (AWGN link).
ChannelRealization flat_channel(int n_fft, int n_symbols);

/// R_f(Delta) = E[H(k) H*(k - Delta)] for the exponential delay density truncated at L.
cd freq_corr(const ChannelParams& params, double separation);

/// |a| x |b| matrix of R_f(a_i - b_j).
CMat freq_corr_matrix(const ChannelParams& params, const Indices& bins_a, const Indices& bins_b);

/// R_t(lag) = J0(2 pi f_max^D lag).
double time_corr(const ChannelParams& params, double lag);

/// Correlation of symbol-stacked responses [H_m, H_{m-1}, ..., H_{m-D+1}] on the given bins:
/// a (D |a|) x (D |b|) matrix with entries R_t(lag) R_f(k - l). When bins_a == bins_b the result is
/// checked to be Hermitian PSD (eigenvalues >= -1e-9); violation throws InternalError.
CMat joint_corr_matrix(const ChannelParams& params, int depth, const Indices& bins_a, const Indices& bins_b);
} // namespace pnm::channel

#endif // PNM_CHANNEL_HPP
