#include "pnm/compensator.hpp"
#include "pnm/errors.hpp"

#include <string>

namespace pnm::rx
{
namespace
{
// cross * (auto + loading I)^-1, with `auto` Hermitian positive definite.
CMat wiener_gain(const CMat& cross, const CMat& autocorr, double loading)
{
    CMat a = autocorr;
    a.diagonal().array() += loading;
    const Eigen::LLT< CMat > llt(a);
    if (llt.info() != Eigen::Success)
        throw InternalError("mmse: loaded correlation matrix is numerically singular");
    return llt.solve(cross.adjoint()).adjoint();
}
} // namespace

MmseEstimator::MmseEstimator(const channel::ChannelParams& channel, const phy::OfdmParams& ofdm, double sigma_w_sq,
                             int depth)
    : n_fft_(ofdm.n_fft), depth_(depth), loading_(sigma_w_sq) // Es = 1
{
    if (depth < 1)
        throw ConfigError("mmse: depth D must be >= 1");
    if (sigma_w_sq < 0.0)
        throw ConfigError("mmse: noise variance must be >= 0");

    const Indices all    = ofdm.all_indices();
    const Indices pilots = ofdm.pilot_indices();
    w_pilot_ = wiener_gain(channel::freq_corr_matrix(channel, all, pilots),
                           channel::freq_corr_matrix(channel, pilots, pilots), loading_);

    w_multi_.reserve(static_cast< size_t >(depth));
    for (int d = 1; d <= depth; ++d)
    {
        const CMat r = channel::joint_corr_matrix(channel, d, all, all);
        w_multi_.push_back(wiener_gain(r.topRows(n_fft_), r, loading_));
    }
    w_full_ = w_multi_.front();
}

const CMat& MmseEstimator::multi_gain(int d) const
{
    if (d < 1 or d > depth_)
        throw ConfigError("mmse: history depth " + std::to_string(d) + " outside 1.." + std::to_string(depth_));
    return w_multi_[static_cast< size_t >(d - 1)];
}

CMat MmseEstimator::estimate(const CMat& ls, MmseKind kind) const
{
    switch (kind)
    {
    case MmseKind::pilot_only:
        if (ls.rows() != w_pilot_.cols())
            throw FramingError("mmse: pilot LS must have Np rows");
        return w_pilot_ * ls;
    case MmseKind::full_grid:
    case MmseKind::multi_symbol:
        if (ls.rows() != n_fft_)
            throw FramingError("mmse: full-grid LS must have N rows");
        return w_full_ * ls;
    }
    throw InternalError("mmse: unknown estimator kind");
}

CMat MmseEstimator::estimate_multi(const CMat& ls_current, const std::vector< CVec >& history) const
{
    const int d = static_cast< int >(history.size()) + 1;
    if (ls_current.rows() != n_fft_)
        throw FramingError("mmse: current LS must have N rows");
    const CMat& w   = multi_gain(d);
    CMat        out = w.leftCols(n_fft_) * ls_current;
    if (d > 1)
    {
        CVec past(static_cast< Eigen::Index >(history.size()) * n_fft_);
        for (size_t i = 0; i < history.size(); ++i)
            past.segment(static_cast< Eigen::Index >(i) * n_fft_, n_fft_) = history[i];
        const CVec shared = w.rightCols(past.size()) * past;
        out.colwise() += shared;
    }
    return out;
}
} // namespace pnm::rx
