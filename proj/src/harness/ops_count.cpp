#include "pnm/errors.hpp"
#include "pnm/harness.hpp"

namespace pnm::harness
{
std::uint64_t formula_mults(int k, int n_fft, int n_iters)
{
    const std::uint64_t K = static_cast< std::uint64_t >(k);
    const std::uint64_t N = static_cast< std::uint64_t >(n_fft);
    return static_cast< std::uint64_t >(n_iters + 1) * (K * (2 * N * N + 6 * N + 1) + N);
}

std::uint64_t formula_adds(int k, int n_fft, int n_iters)
{
    const std::uint64_t K = static_cast< std::uint64_t >(k);
    const std::uint64_t N = static_cast< std::uint64_t >(n_fft);
    return static_cast< std::uint64_t >(n_iters + 1) * (K * N * (3 * N - 2) - K + N - 1);
}

OpsReport count_ops(const SimConfig& cfg)
{
    SimConfig run = cfg;
    run.receiver  = ReceiverKind::alg2;
    run.coded     = true;
    run.ebn0_db   = {cfg.ebn0_db.back()};
    run.validate();

    const PointSimulator sim(run, 0);
    OpsReport            rep;
    rep.n_fft         = run.n_fft;
    rep.k             = sim.codebook()->size();
    rep.n_iters       = run.n_iters;
    rep.formula_mults = formula_mults(rep.k, rep.n_fft, rep.n_iters);
    rep.formula_adds  = formula_adds(rep.k, rep.n_fft, rep.n_iters);

    rx::OpCounter counter;
    (void)sim.run_frame(0, &counter);
    rep.measured_mults = static_cast< double >(counter.mults) / run.symbols_per_frame;
    rep.measured_adds  = static_cast< double >(counter.adds) / run.symbols_per_frame;
    return rep;
}
} // namespace pnm::harness
