#include <doctest.h>

#include "pnm/compensator.hpp"
#include "pnm/errors.hpp"
#include "pnm/numerics/fft.hpp"

#include <cmath>

using namespace pnm;
using namespace pnm::rx;

namespace
{
const phy::OfdmParams kOfdm{};

CMat dft_matrix(int n)
{
    CMat f(n, n);
    for (int k = 0; k < n; ++k)
        for (int t = 0; t < n; ++t)
            f(k, t) = std::polar(1.0 / std::sqrt(static_cast< double >(n)), -2.0 * kPi * k * t / n);
    return f;
}

codebook::Codebook book27()
{
    return codebook::build_codebook(codebook::make_design(64, 4, 3, 2.0 * kPi * 0.01 / 64.0));
}

CVec random_grid(numerics::RngStream& rng)
{
    return phy::build_grid(kOfdm, numerics::random_bits(rng, kOfdm.bits_per_ofdm_symbol()))[0];
}

// One received symbol (with CP) for a given body phase and channel, optionally noisy.
CVec receive(const CVec& grid, const CVec& h, const RVec& body_phase, double sigma_w_sq, numerics::RngStream& rng)
{
    channel::ChannelRealization ch;
    ch.n_fft = 64;
    ch.freq_response.push_back(h);
    phn::PhnTrace trace = phn::zero_trace(64, 16, 1);
    trace.theta.tail(64) = body_phase;
    trace.theta.head(16).setConstant(body_phase[0]);
    return phy::apply_link({phy::ofdm_modulate(grid, kOfdm)}, kOfdm, ch, trace, phy::NoiseModel{sigma_w_sq}, rng)[0];
}

CVec pilot_ref()
{
    CVec r = CVec::Zero(64);
    for (const int p : kOfdm.pilot_indices())
        r[p] = phy::kPilotValue;
    return r;
}
} // namespace

TEST_SUITE("compensator")
{
    TEST_CASE("de-rotation paths")
    {
        const auto          book = book27();
        const CMat          f    = dft_matrix(64);
        const CMat          spec = rotator_spectra(book);
        numerics::RngStream rng(1, 7);
        for (int trial = 0; trial < 20; ++trial)
        {
            const CVec          body = numerics::complex_gaussian_samples(rng, 64, 1.0);
            const CVec          y    = f * body;
            const DerotatedGrid t    = derotate_all(body, book);
            const DerotatedGrid q    = derotate_all_freq(y, spec);
            CHECK((t.col(book.zero_index()) - y).norm() < 1e-12);
            for (int k = 0; k < book.size(); ++k)
            {
                // explicit circulant A_k^-1 = F diag(exp(-j phi_k)) F^H
                const CMat a_inv = f * book.rotators.col(k).asDiagonal() * f.adjoint();
                CHECK((t.col(k) - a_inv * y).norm() < 1e-9);
                CHECK((q.col(k) - a_inv * y).norm() < 1e-9);
                CHECK(std::abs(t.col(k).norm() - y.norm()) < 1e-9);
            }
        }
        CHECK_THROWS_AS(derotate_all(CVec::Zero(32), book), FramingError);
    }

    TEST_CASE("cpe gain")
    {
        numerics::RngStream rng(2, 7);
        const CVec          s    = random_grid(rng);
        const CVec          ones = CVec::Ones(64);
        CHECK(std::abs(cpe_gain(s, ones, s, kOfdm.pilot_indices()) - 1.0) < 1e-12);

        const cd   rot = std::polar(1.0, 0.3);
        const CVec h   = channel::gen_channel(channel::table2_params(), 1, rng).at(0);
        const CVec y   = rot * s.cwiseProduct(h);
        CHECK(std::abs(cpe_gain(y, h, s, kOfdm.pilot_indices()) - rot) < 1e-10);
        CHECK(std::abs(cpe_gain(y, h, s, kOfdm.all_indices()) - rot) < 1e-10);

        CHECK_THROWS_AS(cpe_gain(y, CVec::Zero(64), s, kOfdm.pilot_indices()), EstimationError);
        // a deep fade on one pilot is skipped, the rest still give the rotation
        CVec faded = h;
        faded[8]   = 1e-9;
        CHECK(std::abs(cpe_gain(y, faded, s, kOfdm.pilot_indices()) - rot) < 1e-10);
    }

    TEST_CASE("selection ties and optimality")
    {
        CMat cand(3, 4);
        cand.col(0) << 1, 1, 1;
        cand.col(1) << 0, 0, 0;
        cand.col(2) << 0, 0, 0;
        cand.col(3) << 2, 2, 2;
        const CVec ref = CVec::Zero(3);
        const auto sel = select_trajectory(cand, ref, {0, 1, 2});
        CHECK(sel.k_star == 1);
        CHECK(sel.costs[1] == 0.0);
        CHECK(sel.costs.minCoeff() == sel.costs[sel.k_star]);
    }

    TEST_CASE("algorithm 1 exact-match recovery")
    {
        const auto          book = book27();
        numerics::RngStream rng(3, 7);
        for (int k0 = 0; k0 < book.size(); ++k0)
        {
            const CVec s = random_grid(rng);
            const CVec h = channel::gen_channel(channel::table2_params(), 1, rng).at(0);
            const RVec phase = book.phases.row(k0).transpose().array() + 1.1;
            const auto sel   = receive_symbol_alg1(receive(s, h, phase, 0.0, rng), book, h, kOfdm);
            CHECK(sel.k_star == k0);
            CHECK((sel.symbols - s).cwiseAbs().maxCoeff() < 1e-9);
            CHECK(std::abs(sel.eta - std::polar(1.0, 1.1)) < 1e-9);
        }
    }

    TEST_CASE("no phase noise selects the zero trajectory")
    {
        const auto          book = book27();
        numerics::RngStream rng(4, 7);
        const CVec          s   = random_grid(rng);
        const CVec          h   = channel::gen_channel(channel::table2_params(), 1, rng).at(0);
        const auto          sel = receive_symbol_alg1(receive(s, h, RVec::Zero(64), 0.0, rng), book, h, kOfdm);
        CHECK(sel.k_star == book.zero_index());
        CHECK((sel.symbols - s).norm() < 1e-9);
    }

    TEST_CASE("single trajectory is CPE-only correction")
    {
        const auto book1 = codebook::build_codebook(codebook::make_design(64, 1, 1, 0.01));
        REQUIRE(book1.size() == 1);
        numerics::RngStream rng(5, 7);
        const CVec          ref = pilot_ref();
        for (int trial = 0; trial < 50; ++trial)
        {
            const CVec s = random_grid(rng);
            const CVec h = channel::gen_channel(channel::table2_params(), 1, rng).at(0);
            numerics::RngStream prng(100 + trial, 7);
            const auto          trace = phn::gen_wiener({0.01, 64, 16}, 1, prng);
            const CVec          rx    = receive(s, h, trace.body(0), 0.02, rng);
            const auto          sel   = receive_symbol_alg1(rx, book1, h, kOfdm);
            CHECK(sel.k_star == 0);

            // independent CPE-only reference
            const CVec y = phy::ofdm_demodulate(rx, kOfdm);
            cd         num{0.0, 0.0};
            double     den = 0.0;
            for (const int p : kOfdm.pilot_indices())
            {
                num += std::conj(ref[p]) * y[p] / h[p];
                den += std::norm(ref[p]);
            }
            const CVec s_hat = y.cwiseQuotient((num / den) * h);
            CHECK((sel.symbols - s_hat).norm() < 1e-10);
            CHECK(hard_payload({sel.symbols}, kOfdm) == hard_payload({s_hat}, kOfdm));
        }
    }

    TEST_CASE("least-squares channel")
    {
        numerics::RngStream rng(6, 7);
        const CVec          s = random_grid(rng);
        const CVec          h = channel::gen_channel(channel::table2_params(), 1, rng).at(0);
        const CVec          y = s.cwiseProduct(h);
        CHECK((ls_channel(y, s, kOfdm.all_indices()) - h).norm() < 1e-12);

        const CVec lp = ls_channel(y, s, kOfdm.pilot_indices());
        REQUIRE(lp.size() == 8);
        for (int i = 0; i < 8; ++i)
            CHECK(std::abs(lp[i] - h[8 * i]) < 1e-12);

        // per-bin variance sigma^2 / |S|^2
        const double sigma_sq = 0.05;
        const int    reps     = 20'000;
        RVec         acc      = RVec::Zero(64);
        for (int r = 0; r < reps; ++r)
        {
            const CVec noisy = y + numerics::complex_gaussian_samples(rng, 64, sigma_sq);
            acc += (ls_channel(noisy, s, kOfdm.all_indices()) - h).cwiseAbs2();
        }
        acc /= reps;
        for (int l = 0; l < 64; ++l)
            CHECK(acc[l] == doctest::Approx(sigma_sq / std::norm(s[l])).epsilon(0.10));

        CVec bad = s;
        bad[3]   = 0.0;
        CHECK_THROWS_AS(ls_channel(y, bad, kOfdm.all_indices()), ConfigError);
    }

    TEST_CASE("mmse limits")
    {
        const auto          params = channel::table2_params();
        numerics::RngStream rng(7, 7);

        // Residual is sigma^2 / lambda on the weak eigenmodes of R_f, so it shrinks with sigma^2.
        const MmseEstimator quiet(params, kOfdm, 1e-10, 1);
        const MmseEstimator quieter(params, kOfdm, 1e-12, 1);
        for (int trial = 0; trial < 10; ++trial)
        {
            const CVec   h  = channel::gen_channel(params, 1, rng).at(0);
            const double e1 = (quiet.estimate(h, MmseKind::full_grid) - h).norm() / h.norm();
            const double e2 = (quieter.estimate(h, MmseKind::full_grid) - h).norm() / h.norm();
            CHECK(e1 < 1e-5);
            CHECK(e2 < e1);
        }

        channel::ChannelParams flat = params;
        flat.tau_rms                = 1e-6;
        const double        sw      = 0.1;
        const MmseEstimator est(flat, kOfdm, sw, 1);
        const CVec          ls  = numerics::complex_gaussian_samples(rng, 8, 1.0);
        const CVec          out = est.estimate(ls, MmseKind::pilot_only);
        const cd            avg = ls.sum() / (8.0 + sw);
        CHECK((out.array() - avg).abs().maxCoeff() < 1e-4);

        CHECK_THROWS_AS((void)est.estimate(CVec::Zero(64), MmseKind::pilot_only), FramingError);
        CHECK_THROWS_AS(MmseEstimator(params, kOfdm, 0.1, 0), ConfigError);
    }

    TEST_CASE("pilot mmse beats linear interpolation")
    {
        const auto          params   = channel::table2_params();
        const double        sigma_sq = 0.01; // 20 dB
        const MmseEstimator est(params, kOfdm, sigma_sq, 1);
        numerics::RngStream rng(8, 7);
        double              mse_mmse = 0.0, mse_lin = 0.0;
        const int           reps = 10'000;
        for (int r = 0; r < reps; ++r)
        {
            const CVec h  = channel::gen_channel(params, 1, rng).at(0);
            CVec       ls(8);
            for (int i = 0; i < 8; ++i)
                ls[i] = h[8 * i] + numerics::complex_gaussian_samples(rng, 1, sigma_sq)[0];
            const CVec hm = est.estimate(ls, MmseKind::pilot_only);
            CVec       hl(64);
            for (int l = 0; l < 64; ++l)
            {
                const int    i = l / 8;
                const double t = (l % 8) / 8.0;
                hl[l]          = (1.0 - t) * ls[i] + t * ls[(i + 1) % 8];
            }
            mse_mmse += (hm - h).squaredNorm() / 64.0;
            mse_lin += (hl - h).squaredNorm() / 64.0;
        }
        MESSAGE("pilot MMSE mse " << mse_mmse / reps << ", linear " << mse_lin / reps);
        CHECK(mse_mmse < mse_lin);
    }

    TEST_CASE("multi-symbol estimate")
    {
        auto params      = channel::table2_params();
        params.speed_mps = 0.0;
        const MmseEstimator est(params, kOfdm, 0.05, 3);
        numerics::RngStream rng(9, 7);
        const CMat          ls = numerics::complex_gaussian_samples(rng, 64 * 2, 1.0).reshaped(64, 2);
        CHECK((est.estimate_multi(ls, {}) - est.estimate(ls, MmseKind::full_grid)).norm() < 1e-12);

        const std::vector< CVec > hist{numerics::complex_gaussian_samples(rng, 64, 1.0)};
        const CMat                two = est.estimate_multi(ls, hist);
        const CMat&               w   = est.multi_gain(2);
        CMat                      stacked(128, 1);
        stacked << ls.col(1), hist[0];
        CHECK((two.col(1) - w * stacked).norm() < 1e-10);
        CHECK_THROWS_AS((void)est.multi_gain(4), ConfigError);
        // static channel: an observation twice is averaged, so the gain rows sum the two halves equally
        CHECK((w.leftCols(64) - w.rightCols(64)).norm() < 1e-8);
    }

    TEST_CASE("frame receiver control flow")
    {
        const auto          book   = book27();
        const auto          params = channel::table2_params();
        numerics::RngStream rng(10, 7);
        const coding::CodeParams code{};
        const Bits          info = numerics::random_bits(rng, coding::CodeParams::info_length(kOfdm.bits_per_frame()));
        const auto          grid = encode_frame(info, kOfdm, code);
        std::vector< CVec > tx;
        for (const auto& g : grid)
            tx.push_back(phy::ofdm_modulate(g, kOfdm));
        const auto ch = channel::gen_channel(params, 20, rng);
        const auto rx = phy::apply_link(tx, kOfdm, ch, phn::zero_trace(64, 16, 20), phy::NoiseModel{1e-4}, rng);

        const MmseEstimator mmse(params, kOfdm, 1e-4, 3);
        ReceiverParams      rp;
        rp.ofdm = kOfdm;

        rp.n_iters = 0;
        const auto r0 = receive_frame_alg2(rx, book, mmse, rp, &ch);
        CHECK(r0.passes.size() == 1);
        CHECK(r0.passes[0].size() == 20);
        CHECK(r0.info_bits.size() == info.size());

        rp.n_iters = 2;
        const auto r2 = receive_frame_alg2(rx, book, mmse, rp, &ch);
        CHECK(r2.passes.size() == 3);
        for (const auto& pass : r2.passes)
            for (const auto& d : pass)
                CHECK(d.cost_min <= d.cost_max);

        // deterministic given the same input
        const auto again = receive_frame_alg2(rx, book, mmse, rp, &ch);
        for (size_t p = 0; p < r2.passes.size(); ++p)
            for (size_t m = 0; m < 20; ++m)
                CHECK(again.passes[p][m].k_star == r2.passes[p][m].k_star);

        // known channel, no noise, no phase noise: every pass decodes
        rp.known_channel = true;
        const auto known = receive_frame_alg2(rx, book, mmse, rp, &ch);
        CHECK(known.info_bits == info);

        const auto ideal = equalize_ideal(rx, kOfdm, ch);
        CHECK(decode_payload(hard_payload(ideal, kOfdm), kOfdm, code) == info);
    }

    TEST_CASE("frequency-domain receiver path gives the same decisions")
    {
        const auto          book   = book27();
        const auto          params = channel::table2_params();
        numerics::RngStream rng(11, 7);
        const coding::CodeParams code{};
        const Bits          info = numerics::random_bits(rng, coding::CodeParams::info_length(kOfdm.bits_per_frame()));
        std::vector< CVec > tx;
        for (const auto& g : encode_frame(info, kOfdm, code))
            tx.push_back(phy::ofdm_modulate(g, kOfdm));
        numerics::RngStream prng(12, 7);
        const auto          ch = channel::gen_channel(params, 20, rng);
        const auto          rx = phy::apply_link(tx, kOfdm, ch, phn::gen_wiener({0.01, 64, 16}, 20, prng),
                                                 phy::NoiseModel{0.01}, rng);
        const MmseEstimator mmse(params, kOfdm, 0.01, 3);
        ReceiverParams      rp;
        rp.ofdm       = kOfdm;
        rp.n_iters    = 1;
        const auto a  = receive_frame_alg2(rx, book, mmse, rp);
        rp.freq_derotation = true;
        const auto b  = receive_frame_alg2(rx, book, mmse, rp);
        CHECK(a.info_bits == b.info_bits);
        for (size_t m = 0; m < 20; ++m)
            CHECK(a.passes.back()[m].k_star == b.passes.back()[m].k_star);
    }
}
