#include "pnm/phn.hpp"

#include "pnm/errors.hpp"

#include <cmath>

namespace pnm::phn
{
namespace
{
void check_layout(int n_fft, int n_cp, int n_symbols)
{
    if (n_fft < 1 or n_cp < 0)
        throw ConfigError("phn: invalid symbol layout");
    if (n_symbols < 1)
        throw ConfigError("phn: n_symbols must be >= 1");
}
} // namespace

void WienerPhnParams::validate() const
{
    if (not(beta_t >= 0.0) or not std::isfinite(beta_t))
        throw ConfigError("phn: beta_t must be finite and >= 0");
    check_layout(n_fft, n_cp, 1);
}

double PllPhnParams::stationary_variance() const
{
    const double a = 1.0 - gamma();
    return drive_variance() / (1.0 - a * a);
}

void PllPhnParams::validate() const
{
    if (not(beta_t_vco >= 0.0) or not(beta_t_ref >= 0.0))
        throw ConfigError("phn: PLL beta values must be >= 0");
    for (const double f : {f_lp, f_pd, f_pll, f_c, f_ref, f_s})
        if (not(f > 0.0) or not std::isfinite(f))
            throw ConfigError("phn: PLL frequencies must be finite and > 0");
    if (gamma() >= 2.0)
        throw ConfigError("phn: PLL reversion rate 2*pi*f_pll/f_s must be < 2 for a stable discretization");
    check_layout(n_fft, n_cp, 1);
}

double PhnTrace::psi(int m) const
{
    const Eigen::Index first = static_cast< Eigen::Index >(m) * symbol_length() + n_cp;
    return first == 0 ? 0.0 : theta[first - 1];
}

PhnTrace zero_trace(int n_fft, int n_cp, int n_symbols)
{
    check_layout(n_fft, n_cp, n_symbols);
    PhnTrace trace{n_fft, n_cp, n_symbols, RVec::Zero(static_cast< Eigen::Index >(n_symbols) * (n_fft + n_cp))};
    return trace;
}

PhnTrace gen_wiener(const WienerPhnParams& params, int n_symbols, numerics::RngStream& rng)
{
    params.validate();
    PhnTrace     trace = zero_trace(params.n_fft, params.n_cp, n_symbols);
    const double sigma = std::sqrt(params.sigma_eps_sq());
    if (sigma == 0.0)
        return trace;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < trace.theta.size(); ++i)
    {
        acc += rng.gaussian(sigma);
        trace.theta[i] = acc;
    }
    return trace;
}

PhnTrace gen_pll(const PllPhnParams& params, int n_symbols, numerics::RngStream& rng)
{
    params.validate();
    PhnTrace     trace = zero_trace(params.n_fft, params.n_cp, n_symbols);
    const double sigma = std::sqrt(params.drive_variance());
    if (sigma == 0.0)
        return trace;
    const double keep = 1.0 - params.gamma();
    double       acc  = 0.0;
    for (Eigen::Index i = 0; i < trace.theta.size(); ++i)
    {
        acc            = keep * acc + rng.gaussian(sigma);
        trace.theta[i] = acc;
    }
    return trace;
}
} // namespace pnm::phn
