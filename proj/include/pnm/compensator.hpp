#ifndef PNM_COMPENSATOR_HPP
#define PNM_COMPENSATOR_HPP

#include "pnm/channel.hpp"
#include "pnm/codebook.hpp"
#include "pnm/coding.hpp"
#include "pnm/phy.hpp"
#include "pnm/types.hpp"

#include <cstdint>
#include <vector>

namespace pnm::rx
{
/// Complex multiply/add tallies of an instrumented receiver run.
struct OpCounter
{
    std::uint64_t mults = 0;
    std::uint64_t adds  = 0;

    void add(std::uint64_t m, std::uint64_t a)
    {
        mults += m;
        adds += a;
    }
};

/// Column k holds the post-FFT bins of the received body de-rotated by trajectory k.
using DerotatedGrid = CMat;

/// Time-domain path: multiply the N body samples by exp(-j phi_k(n)) and FFT, for every k.
DerotatedGrid derotate_all(const CVec& body, const codebook::Codebook& book);

/// Unitary spectra of the de-rotation sequences, column k = FFT(exp(-j phi_k)).
CMat rotator_spectra(const codebook::Codebook& book);

/// Frequency-domain path: circulant multiply Y~(l) = sum_q C_k((l - q) mod N) Y(q) / sqrt(N).
DerotatedGrid derotate_all_freq(const CVec& freq_bins, const CMat& spectra);

inline constexpr double kMinChannelMagnitude = 1e-6;

/// Least-squares complex gain sum S* Y~ / H / sum |S|^2 over `bins`. Bins where |H| < min_mag are
/// skipped; throws EstimationError if none remain.
cd cpe_gain(const CVec& derotated, const CVec& channel_est, const CVec& reference, const Indices& bins,
            double min_mag = kMinChannelMagnitude);

struct SelectionResult
{
    int  k_star = 0;
    cd   eta{1.0, 0.0};
    CVec symbols;     ///< equalized S^_m^{k*} on all N bins
    CVec channel_est; ///< H^_m^{k*} on all N bins
    RVec costs;       ///< per-trajectory cost
};

/// argmin_k sum_bins |S^_k(l) - S(l)|^2 over the columns of `candidates`; ties go to the smallest k.
SelectionResult select_trajectory(const CMat& candidates, const CVec& reference, const Indices& bins);

/// Per-bin Y~(l) / S(l) on `bins`, in the order given. A zero reference symbol is a ConfigError.
CVec ls_channel(const CVec& derotated, const CVec& reference, const Indices& bins);

enum class MmseKind
{
    pilot_only,
    full_grid,
    multi_symbol,
};

/// Linear MMSE gains built from the channel correlation model with sigma_w^2 / Es loading.
class MmseEstimator
{
public:
    MmseEstimator() = default;
    /// `channel` supplies the assumed statistics (a mismatched Doppler goes in here).
    MmseEstimator(const channel::ChannelParams& channel, const phy::OfdmParams& ofdm, double sigma_w_sq, int depth);

    [[nodiscard]] int    depth() const { return depth_; }
    [[nodiscard]] double loading() const { return loading_; }

    /// N x Np gain applied to pilot LS values.
    [[nodiscard]] const CMat& pilot_gain() const { return w_pilot_; }
    /// N x N gain applied to full-grid LS values.
    [[nodiscard]] const CMat& full_gain() const { return w_full_; }
    /// N x (d N) gain for the current symbol stacked with d - 1 previous ones (d = 1..D).
    [[nodiscard]] const CMat& multi_gain(int d) const;

    /// Apply to LS columns: pilot_only expects Np rows, the others N rows.
    [[nodiscard]] CMat estimate(const CMat& ls, MmseKind kind) const;

    /// Multi-symbol estimate: current LS columns (N x K) and history (most recent first, at most D - 1
    /// vectors of N). The history contribution is shared by every column.
    [[nodiscard]] CMat estimate_multi(const CMat& ls_current, const std::vector< CVec >& history) const;

private:
    int                 n_fft_   = 0;
    int                 depth_   = 1;
    double              loading_ = 0.0;
    CMat                w_pilot_;
    CMat                w_full_;
    std::vector< CMat > w_multi_;
};

struct ReceiverParams
{
    phy::OfdmParams ofdm;
    coding::CodeParams code{};
    int    n_iters           = 0;
    bool   known_channel     = false;
    /// Rotate history LS vectors onto the current symbol's common phase before stacking.
    bool   align_history     = true;
    bool   freq_derotation   = false;
    double min_channel_mag   = kMinChannelMagnitude;
    OpCounter* counter       = nullptr;
};

/// Algorithm 1: known channel, pilot CPE gain and pilot cost. `received` includes the CP.
SelectionResult receive_symbol_alg1(const CVec& received, const codebook::Codebook& book, const CVec& known_channel,
                                    const phy::OfdmParams& ofdm, OpCounter* counter = nullptr);

struct SymbolDiagnostics
{
    int    k_star      = 0;
    cd     eta{1.0, 0.0};
    double cost_min    = 0.0;
    double cost_max    = 0.0;
    double channel_mse = 0.0; ///< vs the true H when supplied, else 0
};

struct FrameResult
{
    Bits                             info_bits;
    /// Diagnostics of every pass: passes[i][m], pass 0 is the pilot-only pass.
    std::vector< std::vector< SymbolDiagnostics > > passes;
    /// Equalized symbols S^_m^{k*} of the last pass, per OFDM symbol.
    std::vector< CVec > symbols;
};

/// Algorithm 2 over one coded frame (symbols with CP). `truth` feeds the known-channel mode and the
/// channel MSE diagnostic; it may be null when neither is needed.
FrameResult receive_frame_alg2(const std::vector< CVec >& received, const codebook::Codebook& book,
                               const MmseEstimator& mmse, const ReceiverParams& params,
                               const channel::ChannelRealization* truth = nullptr);

/// Reference receiver: true channel, no phase-noise processing, Y / H then hard decisions.
std::vector< CVec > equalize_ideal(const std::vector< CVec >& received, const phy::OfdmParams& ofdm,
                                   const channel::ChannelRealization& truth);

/// Data-bin hard bits of equalized symbols, concatenated over symbols.
Bits hard_payload(const std::vector< CVec >& equalized, const phy::OfdmParams& ofdm);

/// Deinterleave and Viterbi-decode a frame payload.
Bits decode_payload(const Bits& payload, const phy::OfdmParams& ofdm, const coding::CodeParams& code);

/// Encode, interleave and map info bits to the frame grid.
std::vector< CVec > encode_frame(const Bits& info_bits, const phy::OfdmParams& ofdm, const coding::CodeParams& code);
} // namespace pnm::rx

#endif // PNM_COMPENSATOR_HPP
