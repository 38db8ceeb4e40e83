#include "pnm/errors.hpp"
#include "pnm/harness.hpp"

namespace pnm::harness
{
std::vector< MseCell > run_mse(const MseTableConfig& cfg)
{
    const double sigma_eps_sq = phn::WienerPhnParams{cfg.beta_t, cfg.n_fft, 0}.sigma_eps_sq();
    std::vector< MseCell > cells;
    for (const int j : cfg.j_values)
        for (const int q : cfg.q_values)
        {
            const auto design = codebook::make_design(cfg.n_fft, j, q, sigma_eps_sq);
            MseCell    cell;
            cell.q            = q;
            cell.j            = j;
            cell.k            = design.size();
            cell.analytic     = codebook::analytic_mse(design) / codebook::cpe_only_mse(design);
            cell.realizations = cell.k >= cfg.large_k ? cfg.large_realizations : cfg.realizations;

            numerics::RngStream rng(numerics::derive_seed({cfg.seed, static_cast< std::uint64_t >(q),
                                                           static_cast< std::uint64_t >(j)}),
                                    0);
            const auto est = codebook::simulated_mse(design, cell.realizations, rng);
            cell.simulated = est.normalized;
            cell.std_error = est.std_error / codebook::cpe_only_mse(design);
            cells.push_back(cell);
        }
    return cells;
}
} // namespace pnm::harness
