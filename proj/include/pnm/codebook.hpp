#ifndef PNM_CODEBOOK_HPP
#define PNM_CODEBOOK_HPP

#include "pnm/numerics/random.hpp"
#include "pnm/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace pnm::codebook
{
/// Equiprobable Gaussian quantizer of the segment-average phase increment plus the segment layout.
struct CodebookDesign
{
    int    n_fft        = 64;
    int    n_segments   = 1; ///< J
    int    n_regions    = 1; ///< Q
    double sigma_eps_sq = 0.0;
    double sigma_x_sq   = 0.0;
    RVec   boundaries; ///< Q-1 interior region edges, ascending
    RVec   points;     ///< Q conditional means, ascending
    RVec   probs;      ///< Q region masses

    /// Nominal segment length N/J; not an integer when J does not divide N.
    [[nodiscard]] double seg_len() const { return static_cast< double >(n_fft) / n_segments; }
    /// First sample of segment j (j = 0..J); segment j covers [start(j), start(j+1)).
    [[nodiscard]] int segment_start(int j) const { return static_cast< int >((static_cast< long >(j) * n_fft) / n_segments); }
    /// Q^(J-1), saturating at UINT64_MAX.
    [[nodiscard]] std::uint64_t size() const;
};

/// K piecewise-constant trajectories, stored as phases and as de-rotation factors exp(-j phi).
struct Codebook
{
    CodebookDesign design;
    RowMat         phases;    ///< K x N
    CMat           rotators;  ///< N x K, column k = exp(-j phi_k(n))

    [[nodiscard]] int  size() const { return static_cast< int >(phases.rows()); }
    [[nodiscard]] int  n_fft() const { return static_cast< int >(phases.cols()); }
    /// Index of the all-zero trajectory, or -1 when the book has none.
    [[nodiscard]] int zero_index() const;
};

/// sigma_x^2 = (2 L^2 + 1) / (3 L) sigma_eps^2.
double step_variance(double sigma_eps_sq, double seg_len);

/// Interior edges of Q equiprobable regions of N(0, sigma_x^2).
RVec region_boundaries(int n_regions, double sigma_x);

/// Conditional mean of each region delimited by `boundaries` (tails extend to +-infinity).
RVec quantization_points(const RVec& boundaries, double sigma_x);

/// Gaussian mass of each region delimited by `boundaries`.
RVec region_probabilities(const RVec& boundaries, double sigma_x);

CodebookDesign make_design(int n_fft, int n_segments, int n_regions, double sigma_eps_sq);

inline constexpr std::uint64_t kDefaultMaxEntries = 1'000'000;

Codebook build_codebook(const CodebookDesign& design, std::uint64_t max_entries = kDefaultMaxEntries);

/// Increment levels (J of them, first is 0) of trajectory k.
RVec trajectory_levels(const CodebookDesign& design, std::uint64_t k);

/// Expand J levels to N samples using the design's segment layout.
RVec expand_levels(const CodebookDesign& design, const RVec& levels);

/// CPE-only (J = 1) MSE, (N - 1)(N + 1) sigma_eps^2 / 6; the normalizer for every reported MSE.
double cpe_only_mse(const CodebookDesign& design);

/// sigma_q^2 = sum_i P_i (E[X^2 | R_i] - xhat_i^2).
double quantization_error_variance(const CodebookDesign& design);

/// (N + J)(N - J) / (6 J) sigma_eps^2 + L (J - 1) sigma_q^2, in rad^2.
double analytic_mse(const CodebookDesign& design);

struct MseEstimate
{
    double raw        = 0.0; ///< rad^2
    double std_error  = 0.0; ///< rad^2
    double normalized = 0.0; ///< raw / cpe_only_mse
    long   n_realizations = 0;
};

/// R x N matrix of Wiener realizations theta(n) = sum_{i<=n} eps(i).
RowMat wiener_realizations(int n_fft, double sigma_eps_sq, long n_realizations, numerics::RngStream& rng);

/// Monte-Carlo of E[min_{k,psi} sum_n |theta(n) - psi - phi_k(n)|^2] by exhaustive search over all K
/// trajectories (psi is solved in closed form as the mean of theta - phi_k).
MseEstimate simulated_mse(const CodebookDesign& design, long n_realizations, numerics::RngStream& rng);

/// Same as above on caller-supplied realizations (rows).
MseEstimate simulated_mse(const CodebookDesign& design, const RowMat& realizations);

void     write_codebook(std::ostream& os, const Codebook& book);
Codebook read_codebook(std::istream& is);
void     save_codebook(const std::filesystem::path& path, const Codebook& book);
Codebook load_codebook(const std::filesystem::path& path);
} // namespace pnm::codebook

#endif // PNM_CODEBOOK_HPP
