#ifndef PNM_PHN_HPP
#define PNM_PHN_HPP

#include "pnm/numerics/random.hpp"
#include "pnm/types.hpp"

namespace pnm::phn
{
/// Free-running oscillator: phase is a Wiener process whose variance grows by 2*pi*beta_t per N samples.
struct WienerPhnParams
{
    double beta_t = 0.0;
    int    n_fft  = 64;
    int    n_cp   = 16;

    /// Per-sample increment variance sigma_eps^2 = 2 pi beta_t / N (rad^2).
    [[nodiscard]] double sigma_eps_sq() const { return 2.0 * kPi * beta_t / n_fft; }
    void                 validate() const;
};

/// Charge-pump PLL output modelled as a first-order mean-reverting (AR(1)) phase.
///
/// theta(n+1) = (1 - gamma) theta(n) + eps(n), gamma = 2 pi f_pll / f_s, and
/// Var[eps] = 2 pi (beta_t_vco + beta_t_ref) / N. f_lp, f_pd, f_c and f_ref are validated but
/// do not enter the discretization.
struct PllPhnParams
{
    double beta_t_vco = 0.01;
    double beta_t_ref = 1.0 / 512.0;
    double f_lp       = 20e3;
    double f_pd       = 20e3;
    double f_pll      = 100e3;
    double f_c        = 5e9;
    double f_ref      = 100e6;
    double f_s        = 25e6;
    int    n_fft      = 64;
    int    n_cp       = 16;

    [[nodiscard]] double gamma() const { return 2.0 * kPi * f_pll / f_s; }
    [[nodiscard]] double drive_variance() const { return 2.0 * kPi * (beta_t_vco + beta_t_ref) / n_fft; }
    /// Stationary variance of the AR(1) recursion.
    [[nodiscard]] double stationary_variance() const;
    void                 validate() const;
};

/// Per-sample receiver phase over a frame, CP samples included.
struct PhnTrace
{
    int  n_fft     = 0;
    int  n_cp      = 0;
    int  n_symbols = 0;
    RVec theta; ///< n_symbols * (n_fft + n_cp) samples, symbol-major, CP first

    [[nodiscard]] int symbol_length() const { return n_fft + n_cp; }

    /// All N + Ncp samples of symbol m.
    [[nodiscard]] auto symbol(int m) const { return theta.segment(static_cast< Eigen::Index >(m) * symbol_length(), symbol_length()); }

    /// The N samples of symbol m that survive CP removal.
    [[nodiscard]] auto body(int m) const
    {
        return theta.segment(static_cast< Eigen::Index >(m) * symbol_length() + n_cp, n_fft);
    }

    /// Accumulated phase just before the first body sample of symbol m.
    [[nodiscard]] double psi(int m) const;
};

PhnTrace zero_trace(int n_fft, int n_cp, int n_symbols);

/// One continuous random walk over the whole frame (the walk keeps running through CP samples).
PhnTrace gen_wiener(const WienerPhnParams& params, int n_symbols, numerics::RngStream& rng);

PhnTrace gen_pll(const PllPhnParams& params, int n_symbols, numerics::RngStream& rng);
} // namespace pnm::phn

#endif // PNM_PHN_HPP
