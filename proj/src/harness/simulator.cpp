#include "pnm/errors.hpp"
#include "pnm/harness.hpp"

#include <chrono>
#include <cmath>
#include <thread>

namespace pnm::harness
{
namespace
{
enum Stream : std::uint64_t
{
    kBits    = 1,
    kChannel = 2,
    kPhase   = 3,
    kNoise   = 4,
};

long count_errors(const Bits& a, const Bits& b)
{
    if (a.size() != b.size())
        throw InternalError("simulator: decoded length differs from transmitted length");
    long e = 0;
    for (size_t i = 0; i < a.size(); ++i)
        e += (a[i] & 1) != (b[i] & 1);
    return e;
}
} // namespace

PointSimulator::PointSimulator(const SimConfig& cfg, int ebn0_index)
    : cfg_(cfg), ebn0_index_(ebn0_index), ofdm_(cfg.ofdm())
{
    cfg_.validate();
    if (ebn0_index < 0 or ebn0_index >= static_cast< int >(cfg.ebn0_db.size()))
        throw ConfigError("simulator: Eb/N0 index out of range");
    noise_ = phy::NoiseModel::from_ebn0(cfg.ebn0_db[static_cast< size_t >(ebn0_index)], cfg.modulation, cfg.code_rate());

    if (cfg.receiver != ReceiverKind::ideal)
    {
        const double sigma_eps_sq = phn::WienerPhnParams{cfg.design_beta_t(), cfg.n_fft, cfg.n_cp}.sigma_eps_sq();
        book_ = codebook::build_codebook(codebook::make_design(cfg.n_fft, cfg.j, cfg.q, sigma_eps_sq));
    }
    if (cfg.receiver == ReceiverKind::alg2 and not cfg.known_channel)
        mmse_ = rx::MmseEstimator(cfg.assumed_channel(), ofdm_, noise_.sigma_w_sq, cfg.depth);
}

FrameOutcome PointSimulator::run_frame(long frame_index, rx::OpCounter* counter) const
{
    const std::uint64_t seed = numerics::derive_seed(
        {cfg_.seed, static_cast< std::uint64_t >(ebn0_index_), static_cast< std::uint64_t >(frame_index)});
    const numerics::RngStream root(seed, 0);
    numerics::RngStream       bit_rng   = root.substream(kBits);
    numerics::RngStream       ch_rng    = root.substream(kChannel);
    numerics::RngStream       phase_rng = root.substream(kPhase);
    numerics::RngStream       noise_rng = root.substream(kNoise);

    const int                 n_sym = ofdm_.symbols_per_frame;
    const coding::CodeParams  code{n_sym};
    Bits                      truth_bits;
    std::vector< CVec >       grid;
    if (cfg_.coded)
    {
        truth_bits = numerics::random_bits(bit_rng, coding::CodeParams::info_length(ofdm_.bits_per_frame()));
        grid       = rx::encode_frame(truth_bits, ofdm_, code);
    }
    else
    {
        truth_bits = numerics::random_bits(bit_rng, ofdm_.bits_per_frame());
        grid       = phy::build_grid(ofdm_, truth_bits);
    }

    std::vector< CVec > tx;
    tx.reserve(grid.size());
    for (const auto& s : grid)
        tx.push_back(phy::ofdm_modulate(s, ofdm_));

    const channel::ChannelRealization ch = cfg_.channel == ChannelModel::rayleigh
                                               ? channel::gen_channel(cfg_.channel_params(), n_sym, ch_rng)
                                               : channel::flat_channel(cfg_.n_fft, n_sym);
    phn::PhnTrace phase;
    switch (cfg_.phn)
    {
    case PhnModel::none: phase = phn::zero_trace(cfg_.n_fft, cfg_.n_cp, n_sym); break;
    case PhnModel::wiener: phase = phn::gen_wiener(cfg_.wiener(), n_sym, phase_rng); break;
    case PhnModel::pll: phase = phn::gen_pll(cfg_.pll(), n_sym, phase_rng); break;
    }
    const std::vector< CVec > rx_samples = phy::apply_link(tx, ofdm_, ch, phase, noise_, noise_rng);

    FrameOutcome        out;
    std::vector< CVec > equalized;
    Bits                decided;
    const int           zero_k = book_ ? book_->zero_index() : -1;
    switch (cfg_.receiver)
    {
    case ReceiverKind::ideal: equalized = rx::equalize_ideal(rx_samples, ofdm_, ch); break;
    case ReceiverKind::alg1:
        for (int m = 0; m < n_sym; ++m)
        {
            auto sel = rx::receive_symbol_alg1(rx_samples[static_cast< size_t >(m)], *book_, ch.at(m), ofdm_, counter);
            ++out.symbols;
            out.zero_selected += sel.k_star == zero_k;
            equalized.push_back(std::move(sel.symbols));
        }
        break;
    case ReceiverKind::alg2:
    {
        rx::ReceiverParams params;
        params.ofdm            = ofdm_;
        params.code            = code;
        params.n_iters         = cfg_.n_iters;
        params.known_channel   = cfg_.known_channel;
        params.align_history   = cfg_.align_history;
        params.freq_derotation = counter != nullptr;
        params.counter         = counter;
        auto res = rx::receive_frame_alg2(rx_samples, *book_, mmse_, params, &ch);
        for (const auto& d : res.passes.back())
        {
            ++out.symbols;
            out.zero_selected += d.k_star == zero_k;
        }
        decided = std::move(res.info_bits);
        break;
    }
    }

    if (cfg_.receiver != ReceiverKind::alg2)
    {
        const Bits payload = rx::hard_payload(equalized, ofdm_);
        decided            = cfg_.coded ? rx::decode_payload(payload, ofdm_, code) : payload;
    }
    out.errors = count_errors(decided, truth_bits);
    out.bits   = static_cast< long >(truth_bits.size());
    return out;
}

SimResult run_ber(const SimConfig& cfg)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    SimResult  result;
    result.config = cfg;
    result.hash   = config_hash(cfg);

    for (int i = 0; i < static_cast< int >(cfg.ebn0_db.size()); ++i)
    {
        const PointSimulator sim(cfg, i);
        PointResult          pt;
        pt.ebn0_db = cfg.ebn0_db[static_cast< size_t >(i)];

        // Whole batches only, so the stopping point does not depend on the thread count.
        while (pt.frames < cfg.max_frames)
        {
            const long                  batch = std::min< long >(cfg.batch_frames, cfg.max_frames - pt.frames);
            std::vector< FrameOutcome > outcomes(static_cast< size_t >(batch));
            const int                   workers = static_cast< int >(std::min< long >(cfg.threads, batch));
            if (workers <= 1)
            {
                for (long f = 0; f < batch; ++f)
                    outcomes[static_cast< size_t >(f)] = sim.run_frame(pt.frames + f);
            }
            else
            {
                std::vector< std::thread >        pool;
                std::vector< std::exception_ptr > errors(static_cast< size_t >(workers));
                for (int w = 0; w < workers; ++w)
                    pool.emplace_back([&, w] {
                        try
                        {
                            for (long f = w; f < batch; f += workers)
                                outcomes[static_cast< size_t >(f)] = sim.run_frame(pt.frames + f);
                        }
                        catch (...)
                        {
                            errors[static_cast< size_t >(w)] = std::current_exception();
                        }
                    });
                for (auto& t : pool)
                    t.join();
                for (const auto& e : errors)
                    if (e)
                        std::rethrow_exception(e);
            }
            for (const auto& o : outcomes)
            {
                pt.errors += o.errors;
                pt.bits += o.bits;
                pt.symbols += o.symbols;
                pt.zero_selected += o.zero_selected;
            }
            pt.frames += batch;
            if (pt.errors >= cfg.max_errors and pt.bits >= cfg.min_bits)
                break;
        }
        pt.ber       = pt.bits > 0 ? static_cast< double >(pt.errors) / static_cast< double >(pt.bits) : 0.0;
        pt.std_error = pt.bits > 0 ? std::sqrt(pt.ber * (1.0 - pt.ber) / static_cast< double >(pt.bits)) : 0.0;
        result.points.push_back(pt);
    }
    result.wall_seconds = std::chrono::duration< double >(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::optional< double > ebn0_at_ber(const std::vector< PointResult >& points, double target)
{
    for (size_t i = 1; i < points.size(); ++i)
    {
        const auto& a = points[i - 1];
        const auto& b = points[i];
        if (a.ber >= target and b.ber < target)
        {
            if (b.ber <= 0.0)
                return b.ebn0_db;
            const double la = std::log10(a.ber);
            const double lb = std::log10(b.ber);
            const double lt = std::log10(target);
            return a.ebn0_db + (lt - la) / (lb - la) * (b.ebn0_db - a.ebn0_db);
        }
    }
    return std::nullopt;
}
} // namespace pnm::harness
