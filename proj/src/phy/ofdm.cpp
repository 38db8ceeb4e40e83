#include "pnm/errors.hpp"
#include "pnm/numerics/fft.hpp"
#include "pnm/phy.hpp"

#include <cmath>

namespace pnm::phy
{
Indices OfdmParams::pilot_indices() const
{
    Indices idx(static_cast< size_t >(n_pilots));
    for (int i = 0; i < n_pilots; ++i)
        idx[static_cast< size_t >(i)] = i * (n_fft / n_pilots);
    return idx;
}

Indices OfdmParams::data_indices() const
{
    Indices idx;
    idx.reserve(static_cast< size_t >(n_data()));
    const int stride = n_fft / n_pilots;
    for (int k = 0; k < n_fft; ++k)
        if (k % stride != 0)
            idx.push_back(k);
    return idx;
}

Indices OfdmParams::all_indices() const
{
    Indices idx(static_cast< size_t >(n_fft));
    for (int k = 0; k < n_fft; ++k)
        idx[static_cast< size_t >(k)] = k;
    return idx;
}

void OfdmParams::validate() const
{
    if (not numerics::is_power_of_two(n_fft))
        throw ConfigError("ofdm: N must be a power of two");
    if (n_cp < 0 or n_cp > n_fft)
        throw ConfigError("ofdm: Ncp must be in [0, N]");
    if (n_pilots < 1 or n_pilots >= n_fft or n_fft % n_pilots != 0)
        throw ConfigError("ofdm: Np must divide N and leave data bins");
    if (bits_per_symbol != 2 and bits_per_symbol != 4 and bits_per_symbol != 6)
        throw ConfigError("ofdm: bits per symbol must be 2, 4 or 6");
    if (symbols_per_frame < 1)
        throw ConfigError("ofdm: frame must hold at least one symbol");
}

std::vector< CVec > build_grid(const OfdmParams& params, std::span< const unsigned char > payload_bits)
{
    const int per_symbol = params.bits_per_ofdm_symbol();
    if (payload_bits.size() % static_cast< size_t >(per_symbol) != 0)
        throw FramingError("build_grid: payload is not a whole number of OFDM symbols");
    const auto          n_sym  = static_cast< int >(payload_bits.size() / static_cast< size_t >(per_symbol));
    const Indices       pilots = params.pilot_indices();
    const Indices       data   = params.data_indices();
    std::vector< CVec > grid;
    grid.reserve(static_cast< size_t >(n_sym));
    for (int m = 0; m < n_sym; ++m)
    {
        const CVec q = qam_map(payload_bits.subspan(static_cast< size_t >(m) * per_symbol, static_cast< size_t >(per_symbol)),
                               params.bits_per_symbol);
        CVec       s(params.n_fft);
        for (const int p : pilots)
            s[p] = kPilotValue;
        for (size_t i = 0; i < data.size(); ++i)
            s[data[i]] = q[static_cast< Eigen::Index >(i)];
        grid.push_back(std::move(s));
    }
    return grid;
}

CVec data_symbols(const OfdmParams& params, const CVec& grid_symbol)
{
    const Indices data = params.data_indices();
    CVec          out(static_cast< Eigen::Index >(data.size()));
    for (size_t i = 0; i < data.size(); ++i)
        out[static_cast< Eigen::Index >(i)] = grid_symbol[data[i]];
    return out;
}

CVec ofdm_modulate(const CVec& grid_symbol, const OfdmParams& params)
{
    if (grid_symbol.size() != params.n_fft)
        throw FramingError("ofdm_modulate: grid symbol must have N bins");
    const CVec body = numerics::ifft< double >(grid_symbol);
    CVec       out(params.symbol_length());
    out.head(params.n_cp)  = body.tail(params.n_cp);
    out.tail(params.n_fft) = body;
    return out;
}

CVec strip_cp(const CVec& received, const OfdmParams& params)
{
    if (received.size() != params.symbol_length())
        throw FramingError("ofdm: received symbol must have N + Ncp samples");
    return received.tail(params.n_fft);
}

CVec ofdm_demodulate(const CVec& received, const OfdmParams& params)
{
    return numerics::fft< double >(strip_cp(received, params));
}

std::vector< CVec > apply_link(const std::vector< CVec >& tx_symbols, const OfdmParams& params,
                               const channel::ChannelRealization& channel, const phn::PhnTrace& phase,
                               const NoiseModel& noise, numerics::RngStream& rng)
{
    const int n_sym = static_cast< int >(tx_symbols.size());
    if (channel.n_symbols() < n_sym or phase.n_symbols < n_sym)
        throw FramingError("apply_link: channel or phase trace shorter than the frame");
    if (phase.n_fft != params.n_fft or phase.n_cp != params.n_cp)
        throw FramingError("apply_link: phase trace layout does not match the OFDM parameters");

    const double        sigma = std::sqrt(noise.sigma_w_sq / 2.0);
    std::vector< CVec > rx;
    rx.reserve(tx_symbols.size());
    for (int m = 0; m < n_sym; ++m)
    {
        // The CP absorbs the channel memory, so the body sees a circular convolution.
        CVec body = numerics::fft< double >(strip_cp(tx_symbols[static_cast< size_t >(m)], params));
        body      = body.cwiseProduct(channel.at(m));
        numerics::fft_inplace< double >(body, true);

        CVec       y(params.symbol_length());
        const auto theta = phase.symbol(m);
        y.head(params.n_cp)  = body.tail(params.n_cp);
        y.tail(params.n_fft) = body;
        for (Eigen::Index n = 0; n < y.size(); ++n)
        {
            y[n] *= std::polar(1.0, theta[n]);
            if (sigma > 0.0)
            {
                const double re = rng.gaussian(sigma);
                const double im = rng.gaussian(sigma);
                y[n] += cd{re, im};
            }
        }
        rx.push_back(std::move(y));
    }
    return rx;
}
} // namespace pnm::phy
