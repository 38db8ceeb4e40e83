#include "pnm/compensator.hpp"

#include "pnm/errors.hpp"
#include "pnm/numerics/fft.hpp"

#include <cmath>
#include <limits>

namespace pnm::rx
{
namespace
{
std::uint64_t u64(Eigen::Index v)
{
    return static_cast< std::uint64_t >(v);
}

void count_fft(OpCounter* counter, Eigen::Index n, Eigen::Index times)
{
    if (counter == nullptr)
        return;
    const auto stages = static_cast< std::uint64_t >(std::log2(static_cast< double >(n)));
    counter->add(u64(times) * u64(n) / 2 * stages, u64(times) * u64(n) * stages);
}

CVec pilot_reference(const phy::OfdmParams& ofdm)
{
    CVec ref = CVec::Zero(ofdm.n_fft);
    for (const int p : ofdm.pilot_indices())
        ref[p] = phy::kPilotValue;
    return ref;
}
} // namespace

DerotatedGrid derotate_all(const CVec& body, const codebook::Codebook& book)
{
    if (body.size() != book.n_fft())
        throw FramingError("derotate_all: body length differs from the codebook length");
    DerotatedGrid out = book.rotators.array().colwise() * body.array();
    for (Eigen::Index k = 0; k < out.cols(); ++k)
        numerics::fft_inplace< double >(out.col(k));
    return out;
}

CMat rotator_spectra(const codebook::Codebook& book)
{
    CMat spectra = book.rotators;
    for (Eigen::Index k = 0; k < spectra.cols(); ++k)
        numerics::fft_inplace< double >(spectra.col(k));
    return spectra;
}

DerotatedGrid derotate_all_freq(const CVec& freq_bins, const CMat& spectra)
{
    const Eigen::Index n = spectra.rows();
    if (freq_bins.size() != n)
        throw FramingError("derotate_all_freq: bin count differs from the codebook length");
    const double  scale = 1.0 / std::sqrt(static_cast< double >(n));
    DerotatedGrid out(n, spectra.cols());
    CMat          circ(n, n);
    for (Eigen::Index k = 0; k < spectra.cols(); ++k)
    {
        for (Eigen::Index q = 0; q < n; ++q)
            for (Eigen::Index l = 0; l < n; ++l)
                circ(l, q) = spectra((l - q + n) % n, k);
        out.col(k) = scale * (circ * freq_bins);
    }
    return out;
}

cd cpe_gain(const CVec& derotated, const CVec& channel_est, const CVec& reference, const Indices& bins, double min_mag)
{
    cd     num{0.0, 0.0};
    double den  = 0.0;
    int    used = 0;
    for (const int l : bins)
    {
        if (std::abs(channel_est[l]) < min_mag)
            continue;
        num += std::conj(reference[l]) * derotated[l] / channel_est[l];
        den += std::norm(reference[l]);
        ++used;
    }
    if (used == 0 or den == 0.0)
        throw EstimationError("cpe_gain: every bin is below the channel magnitude threshold");
    return num / den;
}

SelectionResult select_trajectory(const CMat& candidates, const CVec& reference, const Indices& bins)
{
    SelectionResult res;
    res.costs.resize(candidates.cols());
    double best = std::numeric_limits< double >::infinity();
    for (Eigen::Index k = 0; k < candidates.cols(); ++k)
    {
        double c = 0.0;
        for (const int l : bins)
            c += std::norm(candidates(l, k) - reference[l]);
        res.costs[k] = c;
        if (c < best) // strict: the first minimum wins
        {
            best       = c;
            res.k_star = static_cast< int >(k);
        }
    }
    res.symbols = candidates.col(res.k_star);
    return res;
}

CVec ls_channel(const CVec& derotated, const CVec& reference, const Indices& bins)
{
    CVec out(static_cast< Eigen::Index >(bins.size()));
    for (size_t i = 0; i < bins.size(); ++i)
    {
        const cd s = reference[bins[i]];
        if (s == cd{0.0, 0.0})
            throw ConfigError("ls_channel: zero reference symbol");
        out[static_cast< Eigen::Index >(i)] = derotated[bins[i]] / s;
    }
    return out;
}

SelectionResult receive_symbol_alg1(const CVec& received, const codebook::Codebook& book, const CVec& known_channel,
                                    const phy::OfdmParams& ofdm, OpCounter* counter)
{
    const CVec          body   = phy::strip_cp(received, ofdm);
    const DerotatedGrid yt     = derotate_all(body, book);
    const Indices       pilots = ofdm.pilot_indices();
    const CVec          ref    = pilot_reference(ofdm);
    const Eigen::Index  n      = ofdm.n_fft;
    const Eigen::Index  K      = yt.cols();
    const auto          np     = static_cast< Eigen::Index >(pilots.size());
    if (counter != nullptr)
    {
        counter->add(u64(K) * u64(n), 0);
        count_fft(counter, n, K);
    }

    std::vector< cd > eta(static_cast< size_t >(K));
    CMat              cand(n, K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const cd e = cpe_gain(yt.col(k), known_channel, ref, pilots);
        eta[static_cast< size_t >(k)] = e;
        cand.col(k) = yt.col(k).cwiseQuotient(e * known_channel);
    }
    if (counter != nullptr)
        counter->add(u64(K) * (3 * u64(np) + 1 + 2 * u64(n) + u64(np)), u64(K) * (u64(np) - 1 + 2 * u64(np)));

    SelectionResult res = select_trajectory(cand, ref, pilots);
    res.eta             = eta[static_cast< size_t >(res.k_star)];
    res.channel_est     = known_channel;
    return res;
}

std::vector< CVec > equalize_ideal(const std::vector< CVec >& received, const phy::OfdmParams& ofdm,
                                   const channel::ChannelRealization& truth)
{
    std::vector< CVec > out;
    out.reserve(received.size());
    for (size_t m = 0; m < received.size(); ++m)
        out.push_back(phy::ofdm_demodulate(received[m], ofdm).cwiseQuotient(truth.at(static_cast< int >(m))));
    return out;
}

Bits hard_payload(const std::vector< CVec >& equalized, const phy::OfdmParams& ofdm)
{
    Bits out;
    out.reserve(equalized.size() * static_cast< size_t >(ofdm.bits_per_ofdm_symbol()));
    for (const auto& s : equalized)
    {
        const Bits b = phy::qam_hard_demap(phy::data_symbols(ofdm, s), ofdm.bits_per_symbol);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

Bits decode_payload(const Bits& payload, const phy::OfdmParams& ofdm, const coding::CodeParams& code)
{
    if (code.interleave_span != ofdm.symbols_per_frame)
        throw ConfigError("decode_payload: interleaver span must equal the frame length");
    const Bits coded = coding::deinterleave(payload, code.interleave_span, ofdm.bits_per_ofdm_symbol(),
                                            coding::frame_row_shift(ofdm.n_data(), ofdm.bits_per_symbol, code.interleave_span));
    return coding::viterbi_decode(coded);
}

std::vector< CVec > encode_frame(const Bits& info_bits, const phy::OfdmParams& ofdm, const coding::CodeParams& code)
{
    if (code.interleave_span != ofdm.symbols_per_frame)
        throw ConfigError("encode_frame: interleaver span must equal the frame length");
    const Bits coded = coding::conv_encode(info_bits);
    if (static_cast< int >(coded.size()) != ofdm.bits_per_frame())
        throw FramingError("encode_frame: codeword does not fill the frame");
    return phy::build_grid(ofdm, coding::interleave(coded, code.interleave_span, ofdm.bits_per_ofdm_symbol(),
                                                          coding::frame_row_shift(ofdm.n_data(), ofdm.bits_per_symbol,
                                                                                  code.interleave_span)));
}
} // namespace pnm::rx
