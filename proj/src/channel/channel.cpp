#include "pnm/channel.hpp"

#include "pnm/errors.hpp"
#include "pnm/numerics/special.hpp"

#include <cmath>

namespace pnm::channel
{
double ChannelParams::doppler_norm() const
{
    if (doppler_override)
        return *doppler_override;
    return speed_mps * f_c / kSpeedOfLight * symbol_duration();
}

void ChannelParams::validate() const
{
    if (not(tau_rms > 0.0))
        throw ConfigError("channel: tau_rms must be > 0");
    if (n_taps < 1)
        throw ConfigError("channel: need at least one path");
    if (n_taps > n_cp)
        throw ConfigError("channel: the cyclic prefix must cover the channel memory (L <= Ncp)");
    if (not(f_s > 0.0) or not(f_c > 0.0) or speed_mps < 0.0)
        throw ConfigError("channel: invalid carrier, sampling rate or speed");
    if (doppler_norm() < 0.0)
        throw ConfigError("channel: Doppler must be >= 0");
}

ChannelParams table2_params()
{
    return ChannelParams{};
}

CVec path_response(const std::vector< Path >& paths, int n_fft, int m)
{
    CVec h = CVec::Zero(n_fft);
    for (const auto& p : paths)
    {
        const cd  start = std::polar(p.amplitude, p.phase + 2.0 * kPi * p.doppler * m);
        const cd  step  = std::polar(1.0, -2.0 * kPi * p.delay / n_fft);
        cd        term  = start;
        for (int k = 0; k < n_fft; ++k)
        {
            h[k] += term;
            term *= step;
        }
    }
    return h;
}

std::vector< Path > draw_paths(const ChannelParams& params, numerics::RngStream& rng)
{
    params.validate();
    const int    L       = params.n_taps;
    const double tau     = params.tau_rms;
    const double fd      = params.doppler_norm();
    const double trunc   = -std::expm1(-L / tau); // 1 - exp(-L / tau)
    const double amp     = 1.0 / std::sqrt(static_cast< double >(L));

    std::vector< Path > paths(static_cast< size_t >(L));
    if (params.integer_delays)
    {
        double total = 0.0;
        for (int i = 0; i < L; ++i)
            total += std::exp(-i / tau);
        for (int i = 0; i < L; ++i)
        {
            auto& p     = paths[static_cast< size_t >(i)];
            p.amplitude = std::sqrt(std::exp(-i / tau) / total);
            p.delay     = i;
            p.phase     = 2.0 * kPi * rng.uniform();
            p.doppler   = fd * std::cos(2.0 * kPi * rng.uniform());
        }
        return paths;
    }
    for (auto& p : paths)
    {
        const double u = rng.uniform();
        p.amplitude    = amp;
        p.delay        = -tau * std::log1p(-u * trunc);
        p.phase        = 2.0 * kPi * rng.uniform();
        p.doppler      = fd * std::cos(2.0 * kPi * rng.uniform());
    }
    return paths;
}

ChannelRealization gen_channel(const ChannelParams& params, int n_symbols, numerics::RngStream& rng)
{
    if (n_symbols < 1)
        throw ConfigError("channel: n_symbols must be >= 1");
    ChannelRealization ch;
    ch.n_fft = params.n_fft;
    ch.paths = draw_paths(params, rng);
    ch.freq_response.reserve(static_cast< size_t >(n_symbols));
    for (int m = 0; m < n_symbols; ++m)
        ch.freq_response.push_back(path_response(ch.paths, params.n_fft, m));
    return ch;
}

ChannelRealization flat_channel(int n_fft, int n_symbols)
{
    ChannelRealization ch;
    ch.n_fft = n_fft;
    ch.paths = {Path{1.0, 0.0, 0.0, 0.0}};
    ch.freq_response.assign(static_cast< size_t >(n_symbols), CVec::Ones(n_fft));
    return ch;
}

cd freq_corr(const ChannelParams& params, double separation)
{
    if (separation == 0.0)
        return 1.0;
    const double L     = params.n_taps;
    const double tau   = params.tau_rms;
    const double omega = 2.0 * kPi * separation / params.n_fft;
    const cd     num   = 1.0 - std::exp(-L * cd{1.0 / tau, omega});
    const cd     den   = -std::expm1(-L / tau) * cd{1.0, omega * tau};
    return num / den;
}

CMat freq_corr_matrix(const ChannelParams& params, const Indices& bins_a, const Indices& bins_b)
{
    CMat r(static_cast< Eigen::Index >(bins_a.size()), static_cast< Eigen::Index >(bins_b.size()));
    for (size_t i = 0; i < bins_a.size(); ++i)
        for (size_t j = 0; j < bins_b.size(); ++j)
            r(static_cast< Eigen::Index >(i), static_cast< Eigen::Index >(j)) =
                freq_corr(params, static_cast< double >(bins_a[i] - bins_b[j]));
    return r;
}

double time_corr(const ChannelParams& params, double lag)
{
    return numerics::bessel_j0(2.0 * kPi * params.doppler_norm() * lag);
}

CMat joint_corr_matrix(const ChannelParams& params, int depth, const Indices& bins_a, const Indices& bins_b)
{
    if (depth < 1)
        throw ConfigError("channel: correlation depth D must be >= 1");
    const CMat         rf = freq_corr_matrix(params, bins_a, bins_b);
    const Eigen::Index na = rf.rows();
    const Eigen::Index nb = rf.cols();
    CMat               r(depth * na, depth * nb);
    for (int a = 0; a < depth; ++a)
        for (int b = 0; b < depth; ++b)
            r.block(a * na, b * nb, na, nb) = time_corr(params, b - a) * rf;

    if (bins_a == bins_b)
    {
        const Eigen::SelfAdjointEigenSolver< CMat > eig(r, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-9)
            throw InternalError("channel: assembled correlation matrix is not positive semidefinite");
    }
    return r;
}
} // namespace pnm::channel
