#ifndef PNM_PHY_HPP
#define PNM_PHY_HPP

#include "pnm/channel.hpp"
#include "pnm/numerics/random.hpp"
#include "pnm/phn.hpp"
#include "pnm/types.hpp"

#include <span>
#include <vector>

namespace pnm::phy
{
/// Pilot symbol on every pilot bin: unit-energy QPSK corner (1 + j) / sqrt(2).
inline const cd kPilotValue{0.70710678118654752440, 0.70710678118654752440};

struct OfdmParams
{
    int n_fft             = 64;
    int n_cp              = 16;
    int n_pilots          = 8;
    int bits_per_symbol   = 4; ///< M: 2 (QPSK), 4 (16-QAM) or 6 (64-QAM)
    int symbols_per_frame = 20;

    [[nodiscard]] int     n_data() const { return n_fft - n_pilots; }
    [[nodiscard]] int     symbol_length() const { return n_fft + n_cp; }
    /// Coded bits carried by one OFDM symbol.
    [[nodiscard]] int     bits_per_ofdm_symbol() const { return n_data() * bits_per_symbol; }
    [[nodiscard]] int     bits_per_frame() const { return bits_per_ofdm_symbol() * symbols_per_frame; }
    /// Pilots at i * N / Np.
    [[nodiscard]] Indices pilot_indices() const;
    [[nodiscard]] Indices data_indices() const;
    [[nodiscard]] Indices all_indices() const;
    void                  validate() const;
};

/// Gray-mapped square QAM with unit average energy. Each axis carries M/2 bits, first bit most
/// significant; bits 0...0 map to the positive corner, e.g. QPSK 00 -> (1 + j) / sqrt(2).
CVec qam_map(std::span< const unsigned char > bits, int bits_per_symbol);

/// Nearest-point hard decision followed by inverse Gray labeling.
Bits qam_hard_demap(const CVec& symbols, int bits_per_symbol);

/// Nearest constellation points.
CVec qam_slice(const CVec& symbols, int bits_per_symbol);

/// Complex noise variance per sample for a given Eb/N0 with unit symbol energy on data bins:
/// sigma_w^2 = 1 / (M * code_rate * 10^(EbN0/10)).
struct NoiseModel
{
    double sigma_w_sq = 0.0;

    static NoiseModel from_ebn0(double ebn0_db, int bits_per_symbol, double code_rate);
};

/// Fill the N-bin grid of each symbol: pilots at pilot bins, consecutive QAM symbols on data bins.
std::vector< CVec > build_grid(const OfdmParams& params, std::span< const unsigned char > payload_bits);

/// Extract data-bin symbols of one grid symbol in data-bin order.
CVec data_symbols(const OfdmParams& params, const CVec& grid_symbol);

/// Unitary IFFT followed by cyclic-prefix insertion.
CVec ofdm_modulate(const CVec& grid_symbol, const OfdmParams& params);

/// Cyclic-prefix removal followed by unitary FFT.
CVec ofdm_demodulate(const CVec& received, const OfdmParams& params);

/// The N samples left after removing the cyclic prefix.
CVec strip_cp(const CVec& received, const OfdmParams& params);

/// Received samples per symbol: circular-equivalent multipath (frequency response H_m), receiver phase
/// rotation exp(j theta(n)) on every sample including the CP, then CN(0, sigma_w^2) noise.
std::vector< CVec > apply_link(const std::vector< CVec >& tx_symbols, const OfdmParams& params,
                               const channel::ChannelRealization& channel, const phn::PhnTrace& phase,
                               const NoiseModel& noise, numerics::RngStream& rng);
} // namespace pnm::phy

#endif // PNM_PHY_HPP
