#include "pnm/compensator.hpp"

#include "pnm/errors.hpp"
#include "pnm/numerics/fft.hpp"

#include <cmath>

namespace pnm::rx
{
namespace
{
std::uint64_t u64(Eigen::Index v)
{
    return static_cast< std::uint64_t >(v);
}

struct PassOutput
{
    std::vector< CVec >              symbols;
    std::vector< SymbolDiagnostics > diag;
    std::vector< int >               k_star;
};

// Candidate equalization S^_k = Y~_k / (eta_k H^_k) and the eta_k themselves.
void equalize_candidates(const DerotatedGrid& yt, const CMat& h, const CVec& ref, const Indices& eta_bins,
                         double min_mag, CMat& cand, std::vector< cd >& eta)
{
    const Eigen::Index K = yt.cols();
    cand.resize(yt.rows(), K);
    eta.resize(static_cast< size_t >(K));
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const cd e = cpe_gain(yt.col(k), h.col(k), ref, eta_bins, min_mag);
        eta[static_cast< size_t >(k)] = e;
        for (Eigen::Index l = 0; l < yt.rows(); ++l)
        {
            const cd g     = e * h(l, k);
            cand(l, k)     = std::abs(h(l, k)) < min_mag ? cd{0.0, 0.0} : yt(l, k) / g;
        }
    }
}

SymbolDiagnostics diagnostics(const SelectionResult& sel, const channel::ChannelRealization* truth, int m)
{
    SymbolDiagnostics d;
    d.k_star   = sel.k_star;
    d.eta      = sel.eta;
    d.cost_min = sel.costs.minCoeff();
    d.cost_max = sel.costs.maxCoeff();
    if (truth != nullptr)
        d.channel_mse = (sel.eta * sel.channel_est - truth->at(m)).squaredNorm() / static_cast< double >(sel.channel_est.size());
    return d;
}
} // namespace

FrameResult receive_frame_alg2(const std::vector< CVec >& received, const codebook::Codebook& book,
                               const MmseEstimator& mmse, const ReceiverParams& params,
                               const channel::ChannelRealization* truth)
{
    const phy::OfdmParams& ofdm   = params.ofdm;
    const int              n_sym  = static_cast< int >(received.size());
    const Eigen::Index     n      = ofdm.n_fft;
    const Eigen::Index     K      = book.size();
    const Indices          pilots = ofdm.pilot_indices();
    const Indices          all    = ofdm.all_indices();
    const auto             np     = static_cast< Eigen::Index >(pilots.size());
    OpCounter*             ops    = params.counter;

    if (n_sym != ofdm.symbols_per_frame)
        throw FramingError("alg2: frame must hold exactly the configured number of symbols");
    if (params.known_channel and truth == nullptr)
        throw ConfigError("alg2: known-channel mode needs the true channel");
    if (params.n_iters < 0)
        throw ConfigError("alg2: n_iters must be >= 0");

    // De-rotation does not depend on the pass, so do it once per symbol.
    std::vector< DerotatedGrid > yt(static_cast< size_t >(n_sym));
    {
        const CMat spectra = params.freq_derotation ? rotator_spectra(book) : CMat{};
        for (int m = 0; m < n_sym; ++m)
        {
            const CVec body = phy::strip_cp(received[static_cast< size_t >(m)], ofdm);
            if (params.freq_derotation)
                yt[static_cast< size_t >(m)] = derotate_all_freq(numerics::fft< double >(body), spectra);
            else
                yt[static_cast< size_t >(m)] = derotate_all(body, book);
        }
        if (ops != nullptr)
        {
            // One FFT per symbol, then a dense N x N circulant product per trajectory.
            const auto stages = static_cast< std::uint64_t >(std::log2(static_cast< double >(n)));
            if (params.freq_derotation)
                ops->add(u64(n_sym) * (u64(n) / 2 * stages + u64(K) * u64(n) * u64(n)),
                         u64(n_sym) * (u64(n) * stages + u64(K) * u64(n) * (u64(n) - 1)));
            else
                ops->add(u64(n_sym) * u64(K) * (u64(n) + u64(n) / 2 * stages), u64(n_sym) * u64(K) * u64(n) * stages);
        }
    }

    FrameResult result;
    CMat        cand;
    std::vector< cd > eta;

    auto known_h = [&](int m) { return CMat(truth->at(m).replicate(1, K)); };

    // Zeroth pass: pilot LS, pilot-only MMSE, pilot CPE gain and pilot cost.
    PassOutput pass;
    {
        CVec ref = CVec::Zero(n);
        for (const int p : pilots)
            ref[p] = phy::kPilotValue;
        for (int m = 0; m < n_sym; ++m)
        {
            const DerotatedGrid& y = yt[static_cast< size_t >(m)];
            CMat                 h;
            if (params.known_channel)
                h = known_h(m);
            else
            {
                CMat ls(np, K);
                for (Eigen::Index k = 0; k < K; ++k)
                    ls.col(k) = ls_channel(y.col(k), ref, pilots);
                h = mmse.estimate(ls, MmseKind::pilot_only);
                if (ops != nullptr)
                    ops->add(u64(K) * (u64(np) + u64(n) * u64(np)), u64(K) * u64(n) * (u64(np) - 1));
            }
            equalize_candidates(y, h, ref, pilots, params.min_channel_mag, cand, eta);
            SelectionResult sel = select_trajectory(cand, ref, pilots);
            sel.eta             = eta[static_cast< size_t >(sel.k_star)];
            sel.channel_est     = h.col(sel.k_star);
            if (ops != nullptr)
                ops->add(u64(K) * (3 * u64(np) + 1 + 2 * u64(n) + u64(np)), u64(K) * (3 * u64(np) - 1));
            pass.diag.push_back(diagnostics(sel, truth, m));
            pass.k_star.push_back(sel.k_star);
            pass.symbols.push_back(std::move(sel.symbols));
        }
    }
    result.info_bits = decode_payload(hard_payload(pass.symbols, ofdm), ofdm, params.code);
    result.passes.push_back(std::move(pass.diag));

    for (int it = 0; it < params.n_iters; ++it)
    {
        // Decision feedback reference grid; build_grid puts the true pilots back.
        const std::vector< CVec > sbar = encode_frame(result.info_bits, ofdm, params.code);
        PassOutput                next;
        std::vector< CVec >       history; // selected LS vectors, most recent first
        const int                 max_hist = mmse.depth() - 1;

        for (int m = 0; m < n_sym; ++m)
        {
            const DerotatedGrid& y   = yt[static_cast< size_t >(m)];
            const CVec&          ref = sbar[static_cast< size_t >(m)];
            CMat                 h;
            CMat                 ls;
            if (params.known_channel)
                h = known_h(m);
            else
            {
                ls = y.array().colwise() / ref.array();
                if (max_hist > 0 and not history.empty())
                {
                    std::vector< CVec > aligned = history;
                    if (params.align_history)
                    {
                        // Common phase of this symbol taken from the previous pass's choice.
                        const CVec cur = ls.col(pass.k_star[static_cast< size_t >(m)]);
                        for (auto& v : aligned)
                        {
                            const cd c = v.dot(cur); // sum conj(v) cur
                            if (std::abs(c) > 0.0)
                                v *= c / std::abs(c);
                        }
                    }
                    h = mmse.estimate_multi(ls, aligned);
                    if (ops != nullptr)
                        ops->add(u64(K) * u64(n) * u64(n) + u64(aligned.size()) * u64(n) * u64(n),
                                 u64(K) * u64(n) * (u64(n) - 1) + u64(aligned.size()) * u64(n) * u64(n));
                }
                else
                {
                    h = mmse.estimate(ls, MmseKind::full_grid);
                    if (ops != nullptr)
                        ops->add(u64(K) * u64(n) * u64(n), u64(K) * u64(n) * (u64(n) - 1));
                }
                if (ops != nullptr)
                    ops->add(u64(K) * u64(n), 0);
            }
            equalize_candidates(y, h, ref, all, params.min_channel_mag, cand, eta);
            SelectionResult sel = select_trajectory(cand, ref, all);
            sel.eta             = eta[static_cast< size_t >(sel.k_star)];
            sel.channel_est     = h.col(sel.k_star);
            if (ops != nullptr)
                ops->add(u64(K) * (6 * u64(n) + 1), u64(K) * (3 * u64(n) - 1));

            if (not params.known_channel and max_hist > 0)
            {
                history.insert(history.begin(), ls.col(sel.k_star));
                if (static_cast< int >(history.size()) > max_hist)
                    history.pop_back();
            }
            next.diag.push_back(diagnostics(sel, truth, m));
            next.k_star.push_back(sel.k_star);
            next.symbols.push_back(std::move(sel.symbols));
        }
        result.info_bits = decode_payload(hard_payload(next.symbols, ofdm), ofdm, params.code);
        result.passes.push_back(std::move(next.diag));
        pass = std::move(next);
    }
    result.symbols = std::move(pass.symbols);
    return result;
}
} // namespace pnm::rx
