#include <doctest.h>

#include "pnm/channel.hpp"
#include "pnm/errors.hpp"

#include <cmath>

using namespace pnm;
using namespace pnm::channel;

namespace
{
// R_f by Simpson quadrature over the truncated exponential delay density.
cd freq_corr_quadrature(const ChannelParams& p, double sep)
{
    const int    n    = 20'000;
    const double L    = p.n_taps;
    const double h    = L / n;
    const double norm = p.tau_rms * (1.0 - std::exp(-L / p.tau_rms));
    cd           s{0.0, 0.0};
    for (int i = 0; i <= n; ++i)
    {
        const double t = i * h;
        const double w = (i == 0 or i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::exp(-t / p.tau_rms) * std::polar(1.0, -2.0 * kPi * sep * t / p.n_fft);
    }
    return s * h / 3.0 / norm;
}
} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("reference configuration")
    {
        const ChannelParams p = table2_params();
        CHECK(p.n_taps == 10);
        CHECK(p.tau_rms == doctest::Approx(120e-9 * p.f_s));
        CHECK(p.symbol_duration() == doctest::Approx(3.2e-6));
        CHECK(p.doppler_norm() == doctest::Approx(7.0 / 3.6 * 5e9 / kSpeedOfLight * 3.2e-6));
    }

    TEST_CASE("zero speed freezes the channel")
    {
        ChannelParams p = table2_params();
        p.speed_mps     = 0.0;
        numerics::RngStream rng(1, 2);
        const auto          ch = gen_channel(p, 6, rng);
        for (int m = 1; m < 6; ++m)
            CHECK(ch.at(m) == ch.at(0));
    }

    TEST_CASE("one path is flat in magnitude")
    {
        ChannelParams p = table2_params();
        p.n_taps        = 1;
        numerics::RngStream rng(2, 2);
        const auto          ch = gen_channel(p, 1, rng);
        const RVec          mag = ch.at(0).cwiseAbs();
        CHECK(mag.maxCoeff() - mag.minCoeff() < 1e-12);
    }

    TEST_CASE("unit average power")
    {
        const ChannelParams p = table2_params();
        numerics::RngStream rng(3, 2);
        double              acc = 0.0;
        const int           reps = 10'000;
        for (int r = 0; r < reps; ++r)
            acc += std::norm(gen_channel(p, 1, rng).at(0)[17]);
        CHECK(acc / reps >= 0.97);
        CHECK(acc / reps <= 1.03);
    }

    TEST_CASE("frequency correlation closed form")
    {
        const ChannelParams p = table2_params();
        CHECK(freq_corr(p, 0.0) == cd{1.0, 0.0});
        for (const double sep : {-9.0, -1.0, 0.5, 1.0, 4.0, 8.0, 31.0, 63.0})
            CHECK(std::abs(freq_corr(p, sep) - freq_corr_quadrature(p, sep)) < 1e-9);
        CHECK(std::abs(freq_corr(p, 3.0) - std::conj(freq_corr(p, -3.0))) < 1e-15);

        ChannelParams flat = p;
        flat.tau_rms       = 1e-6;
        for (const double sep : {1.0, 7.0, 40.0})
            CHECK(std::abs(freq_corr(flat, sep) - 1.0) < 1e-4);
    }

    TEST_CASE("sample covariance of generated channels")
    {
        const ChannelParams p = table2_params();
        numerics::RngStream rng(4, 2);
        const int           reps = 20'000;
        const Indices       bins{0, 1, 3, 8, 16, 31, 63};
        CMat                acc = CMat::Zero(7, 7);
        for (int r = 0; r < reps; ++r)
        {
            const CVec h = gen_channel(p, 1, rng).at(0);
            CVec       x(7);
            for (int i = 0; i < 7; ++i)
                x[i] = h[bins[static_cast< size_t >(i)]];
            acc += x * x.adjoint();
        }
        acc /= reps;
        CHECK((acc - freq_corr_matrix(p, bins, bins)).cwiseAbs().maxCoeff() < 0.04);
    }

    TEST_CASE("time correlation")
    {
        ChannelParams p = table2_params();
        CHECK(time_corr(p, 0.0) == 1.0);
        p.speed_mps = 0.0;
        for (int lag = 0; lag < 5; ++lag)
            CHECK(time_corr(p, lag) == 1.0);
    }

    TEST_CASE("joint correlation structure")
    {
        ChannelParams p = table2_params();
        const Indices bins{0, 8, 16};
        CHECK((joint_corr_matrix(p, 1, bins, bins) - freq_corr_matrix(p, bins, bins)).norm() == 0.0);

        p.speed_mps      = 0.0;
        const CMat rf    = freq_corr_matrix(p, bins, bins);
        const CMat joint = joint_corr_matrix(p, 3, bins, bins);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                CHECK((joint.block(3 * a, 3 * b, 3, 3) - rf).norm() < 1e-15);
        CHECK_THROWS_AS(joint_corr_matrix(p, 0, bins, bins), ConfigError);
    }

    TEST_CASE("joint correlation against Monte-Carlo")
    {
        ChannelParams p    = table2_params();
        p.doppler_override = 0.05;
        const Indices       bins{2, 7};
        const CMat          model = joint_corr_matrix(p, 2, bins, bins);
        numerics::RngStream rng(5, 2);
        CMat                acc  = CMat::Zero(4, 4);
        const int           reps = 20'000;
        for (int r = 0; r < reps; ++r)
        {
            const auto ch = gen_channel(p, 2, rng);
            CVec       x(4);
            x << ch.at(1)[2], ch.at(1)[7], ch.at(0)[2], ch.at(0)[7];
            acc += x * x.adjoint();
        }
        acc /= reps;
        CHECK((acc - model).cwiseAbs().maxCoeff() < 0.03);
    }

    TEST_CASE("integer tap model")
    {
        ChannelParams p  = table2_params();
        p.integer_delays = true;
        numerics::RngStream rng(6, 2);
        const auto          paths = draw_paths(p, rng);
        double              power = 0.0;
        for (size_t i = 0; i < paths.size(); ++i)
        {
            CHECK(paths[i].delay == static_cast< double >(i));
            power += paths[i].amplitude * paths[i].amplitude;
        }
        CHECK(power == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(paths[1].amplitude / paths[0].amplitude == doctest::Approx(std::exp(-0.5 / p.tau_rms)));
    }

    TEST_CASE("validation")
    {
        ChannelParams p = table2_params();
        p.n_taps        = 17;
        numerics::RngStream rng(1, 2);
        CHECK_THROWS_AS(gen_channel(p, 1, rng), ConfigError);
        p        = table2_params();
        p.tau_rms = 0.0;
        CHECK_THROWS_AS(gen_channel(p, 1, rng), ConfigError);
    }
}
