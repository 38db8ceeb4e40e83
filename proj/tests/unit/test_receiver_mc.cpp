#include <doctest.h>

#include "pnm/harness.hpp"

#include <cmath>

using namespace pnm;
using namespace pnm::harness;

namespace
{
PointResult one_point(SimConfig cfg)
{
    cfg.max_errors = 1'000'000'000;
    return run_ber(cfg).points.front();
}

bool below(const PointResult& a, const PointResult& b)
{
    return a.ber + 2.0 * std::hypot(a.std_error, b.std_error) < b.ber;
}
} // namespace

TEST_SUITE("receiver_mc")
{
    TEST_CASE("codebook beats CPE-only on AWGN")
    {
        SimConfig cfg;
        cfg.channel    = ChannelModel::awgn;
        cfg.receiver   = ReceiverKind::alg1;
        cfg.coded      = false;
        cfg.ebn0_db    = {16.0};
        cfg.max_frames = 224; // 1.0e6 bits
        cfg.seed       = 11;
        const auto k27 = one_point(cfg);
        cfg.q          = 1;
        cfg.j          = 1;
        const auto k1  = one_point(cfg);
        MESSAGE("K=27 " << k27.ber << " +- " << k27.std_error << ", K=1 " << k1.ber << " +- " << k1.std_error);
        CHECK(k27.bits >= 1'000'000);
        CHECK(below(k27, k1));
    }

    TEST_CASE("decision feedback iterations help")
    {
        SimConfig cfg;
        cfg.ebn0_db    = {16.0};
        cfg.max_frames = 48;
        cfg.seed       = 12;
        cfg.n_iters    = 2;
        const auto i2  = one_point(cfg);
        cfg.n_iters    = 0;
        const auto i0  = one_point(cfg);
        MESSAGE("2 iterations " << i2.ber << " +- " << i2.std_error << ", 0 iterations " << i0.ber << " +- " << i0.std_error);
        CHECK(below(i2, i0));
    }
}

// Expected to fail with eight pilots: their spacing (8 bins) is shorter than the channel's
// delay span (up to 10 samples), so pilot-only estimation has an error floor.
TEST_SUITE("receiver_sanity")
{
    TEST_CASE("no phase noise at 30 dB decodes every frame")
    {
        SimConfig cfg;
        cfg.phn        = PhnModel::none;
        cfg.ebn0_db    = {30.0};
        cfg.max_frames = 100;
        cfg.seed       = 13;
        const auto p   = one_point(cfg);
        MESSAGE("BER " << p.ber << " over " << p.bits << " bits");
        CHECK(p.errors == 0);
    }
}
