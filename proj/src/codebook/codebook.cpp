#include "pnm/codebook.hpp"

#include "pnm/errors.hpp"
#include "pnm/numerics/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pnm::codebook
{
namespace
{
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461; // 1/sqrt(2 pi)

// Lower/upper edge of region i; infinities for the tails.
double lower_edge(const RVec& b, Eigen::Index i)
{
    return i == 0 ? -std::numeric_limits< double >::infinity() : b[i - 1];
}
double upper_edge(const RVec& b, Eigen::Index i)
{
    return i == b.size() ? std::numeric_limits< double >::infinity() : b[i];
}

// P[a <= X < b] for X ~ N(0, sigma^2), evaluated on the tail side that avoids cancellation.
double gaussian_mass(double a, double b, double sigma)
{
    const double s = std::numbers::sqrt2 * sigma;
    if (a >= 0.0)
        return 0.5 * (std::erfc(a / s) - std::erfc(b / s));
    if (b <= 0.0)
        return 0.5 * (std::erfc(-b / s) - std::erfc(-a / s));
    return 0.5 * (std::erf(b / s) - std::erf(a / s));
}

// x * exp(-x^2 / 2 sigma^2), zero at +-infinity.
double x_gauss(double x, double sigma)
{
    return std::isinf(x) ? 0.0 : x * std::exp(-0.5 * x * x / (sigma * sigma));
}
double gauss(double x, double sigma)
{
    return std::isinf(x) ? 0.0 : std::exp(-0.5 * x * x / (sigma * sigma));
}

void check_regions(int n_regions)
{
    if (n_regions < 1)
        throw ConfigError("codebook: number of regions Q must be >= 1");
}

std::uint64_t saturating_pow(std::uint64_t base, int exp)
{
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i)
    {
        if (base != 0 and r > std::numeric_limits< std::uint64_t >::max() / base)
            return std::numeric_limits< std::uint64_t >::max();
        r *= base;
    }
    return r;
}

RowMat centered_rows(const RowMat& m)
{
    return m.colwise() - m.rowwise().mean();
}
} // namespace

std::uint64_t CodebookDesign::size() const
{
    return saturating_pow(static_cast< std::uint64_t >(n_regions), n_segments - 1);
}

int Codebook::zero_index() const
{
    for (int k = 0; k < size(); ++k)
        if (phases.row(k).isZero(0.0))
            return k;
    return -1;
}

double step_variance(double sigma_eps_sq, double seg_len)
{
    if (not(seg_len >= 1.0))
        throw ConfigError("codebook: segment length must be >= 1");
    return (2.0 * seg_len * seg_len + 1.0) / (3.0 * seg_len) * sigma_eps_sq;
}

RVec region_boundaries(int n_regions, double sigma_x)
{
    check_regions(n_regions);
    const int    q     = n_regions;
    const double scale = std::numbers::sqrt2 * sigma_x;
    RVec         edges(q - 1);
    if (q % 2 == 1)
    {
        const int r = (q - 1) / 2;
        for (int l = 1; l <= r; ++l)
        {
            const double x    = scale * numerics::erf_inv(static_cast< double >(2 * l - 1) / q);
            edges[r + l - 1]  = x;
            edges[r - l]      = -x;
        }
    }
    else
    {
        const int r = q / 2;
        edges[r - 1] = 0.0;
        for (int l = 1; l < r; ++l)
        {
            const double x    = scale * numerics::erf_inv(static_cast< double >(2 * l) / q);
            edges[r - 1 + l]  = x;
            edges[r - 1 - l]  = -x;
        }
    }
    return edges;
}

RVec region_probabilities(const RVec& boundaries, double sigma_x)
{
    const Eigen::Index q = boundaries.size() + 1;
    RVec               p(q);
    if (sigma_x == 0.0)
    {
        p.setConstant(1.0 / static_cast< double >(q));
        return p;
    }
    for (Eigen::Index i = 0; i < q; ++i)
        p[i] = gaussian_mass(lower_edge(boundaries, i), upper_edge(boundaries, i), sigma_x);
    return p;
}

RVec quantization_points(const RVec& boundaries, double sigma_x)
{
    const Eigen::Index q = boundaries.size() + 1;
    RVec               pts(q);
    if (sigma_x == 0.0)
    {
        pts.setZero();
        return pts;
    }
    for (Eigen::Index i = 0; i < q; ++i)
    {
        const double a = lower_edge(boundaries, i);
        const double b = upper_edge(boundaries, i);
        pts[i]         = sigma_x * kInvSqrt2Pi * (gauss(a, sigma_x) - gauss(b, sigma_x)) / gaussian_mass(a, b, sigma_x);
    }
    // Exact antisymmetry removes round-off asymmetry between mirrored regions.
    for (Eigen::Index i = 0; i < q / 2; ++i)
    {
        const double m   = 0.5 * (pts[q - 1 - i] - pts[i]);
        pts[i]           = -m;
        pts[q - 1 - i]   = m;
    }
    if (q % 2 == 1)
        pts[q / 2] = 0.0;
    return pts;
}

CodebookDesign make_design(int n_fft, int n_segments, int n_regions, double sigma_eps_sq)
{
    if (n_fft < 1)
        throw ConfigError("codebook: N must be >= 1");
    if (n_segments < 1 or n_segments > n_fft)
        throw ConfigError("codebook: number of segments J must be in [1, N]");
    check_regions(n_regions);
    if (not(sigma_eps_sq >= 0.0) or not std::isfinite(sigma_eps_sq))
        throw ConfigError("codebook: sigma_eps^2 must be finite and >= 0");

    CodebookDesign d;
    d.n_fft        = n_fft;
    d.n_segments   = n_segments;
    d.n_regions    = n_regions;
    d.sigma_eps_sq = sigma_eps_sq;
    d.sigma_x_sq   = step_variance(sigma_eps_sq, d.seg_len());
    const double sx = std::sqrt(d.sigma_x_sq);
    d.boundaries   = region_boundaries(n_regions, sx);
    d.points       = quantization_points(d.boundaries, sx);
    d.probs        = region_probabilities(d.boundaries, sx);
    return d;
}

RVec trajectory_levels(const CodebookDesign& design, std::uint64_t k)
{
    const int J = design.n_segments;
    const auto Q = static_cast< std::uint64_t >(design.n_regions);
    RVec      digits_level(J);
    // Segment 1 is the most significant base-Q digit of k.
    std::vector< int > digits(static_cast< size_t >(std::max(J - 1, 0)));
    for (int j = J - 2; j >= 0; --j)
    {
        digits[static_cast< size_t >(j)] = static_cast< int >(k % Q);
        k /= Q;
    }
    digits_level[0] = 0.0;
    for (int j = 1; j < J; ++j)
        digits_level[j] = digits_level[j - 1] + design.points[digits[static_cast< size_t >(j - 1)]];
    return digits_level;
}

RVec expand_levels(const CodebookDesign& design, const RVec& levels)
{
    RVec out(design.n_fft);
    for (int j = 0; j < design.n_segments; ++j)
    {
        const int a = design.segment_start(j);
        const int b = design.segment_start(j + 1);
        out.segment(a, b - a).setConstant(levels[j]);
    }
    return out;
}

Codebook build_codebook(const CodebookDesign& design, std::uint64_t max_entries)
{
    const std::uint64_t K = design.size();
    if (K > max_entries)
        throw ConfigError("codebook: K = Q^(J-1) = " + std::to_string(K) + " exceeds the cap of " +
                          std::to_string(max_entries));
    Codebook book;
    book.design = design;
    book.phases.resize(static_cast< Eigen::Index >(K), design.n_fft);
    for (std::uint64_t k = 0; k < K; ++k)
        book.phases.row(static_cast< Eigen::Index >(k)) = expand_levels(design, trajectory_levels(design, k)).transpose();
    book.rotators = (book.phases.transpose().cast< cd >() * cd{0.0, -1.0}).array().exp().matrix();
    return book;
}

double cpe_only_mse(const CodebookDesign& design)
{
    const double n = design.n_fft;
    return (n - 1.0) * (n + 1.0) * design.sigma_eps_sq / 6.0;
}

double quantization_error_variance(const CodebookDesign& design)
{
    const double sx = std::sqrt(design.sigma_x_sq);
    if (sx == 0.0)
        return 0.0;
    double var = 0.0;
    for (Eigen::Index i = 0; i < design.points.size(); ++i)
    {
        const double a  = lower_edge(design.boundaries, i);
        const double b  = upper_edge(design.boundaries, i);
        const double p  = gaussian_mass(a, b, sx);
        // int_R x^2 f(x) dx = sigma^2 P - sigma / sqrt(2 pi) [x exp(-x^2 / 2 sigma^2)]_a^b
        const double m2 = design.sigma_x_sq * p - sx * kInvSqrt2Pi * (x_gauss(b, sx) - x_gauss(a, sx));
        var += m2 - p * design.points[i] * design.points[i];
    }
    return var;
}

double analytic_mse(const CodebookDesign& design)
{
    const double n = design.n_fft;
    const double j = design.n_segments;
    return (n + j) * (n - j) / (6.0 * j) * design.sigma_eps_sq +
           design.seg_len() * (j - 1.0) * quantization_error_variance(design);
}

RowMat wiener_realizations(int n_fft, double sigma_eps_sq, long n_realizations, numerics::RngStream& rng)
{
    if (n_realizations < 1)
        throw ConfigError("simulated_mse: need at least one realization");
    const double sigma = std::sqrt(sigma_eps_sq);
    RowMat       theta(n_realizations, n_fft);
    for (long r = 0; r < n_realizations; ++r)
    {
        double acc = 0.0;
        for (int n = 0; n < n_fft; ++n)
        {
            acc += rng.gaussian(sigma);
            theta(r, n) = acc;
        }
    }
    return theta;
}

MseEstimate simulated_mse(const CodebookDesign& design, long n_realizations, numerics::RngStream& rng)
{
    return simulated_mse(design, wiener_realizations(design.n_fft, design.sigma_eps_sq, n_realizations, rng));
}

MseEstimate simulated_mse(const CodebookDesign& design, const RowMat& realizations)
{
    if (realizations.rows() < 1 or realizations.cols() != design.n_fft)
        throw ConfigError("simulated_mse: realizations must be R x N with R >= 1");
    constexpr std::uint64_t kMaxSearch = 100'000'000;
    const std::uint64_t     K          = design.size();
    if (K > kMaxSearch)
        throw ConfigError("simulated_mse: K = " + std::to_string(K) + " is too large for exhaustive search");

    const RowMat theta = centered_rows(realizations);
    const RVec   theta_sq = theta.rowwise().squaredNorm();
    RVec         best     = RVec::Constant(theta.rows(), std::numeric_limits< double >::infinity());

    constexpr std::uint64_t kChunk = 2048;
    RowMat                  chunk;
    for (std::uint64_t k0 = 0; k0 < K; k0 += kChunk)
    {
        const auto rows = static_cast< Eigen::Index >(std::min(kChunk, K - k0));
        chunk.resize(rows, design.n_fft);
        for (Eigen::Index r = 0; r < rows; ++r)
            chunk.row(r) = expand_levels(design, trajectory_levels(design, k0 + static_cast< std::uint64_t >(r))).transpose();
        chunk = centered_rows(chunk);
        const RVec   chunk_sq = chunk.rowwise().squaredNorm();
        const RowMat cross    = theta * chunk.transpose();
        for (Eigen::Index r = 0; r < theta.rows(); ++r)
        {
            const double d = (chunk_sq.transpose().array() - 2.0 * cross.row(r).array()).minCoeff() + theta_sq[r];
            best[r]        = std::min(best[r], std::max(d, 0.0));
        }
    }

    MseEstimate est;
    est.n_realizations = theta.rows();
    est.raw            = best.mean();
    if (theta.rows() > 1)
    {
        const double var = (best.array() - est.raw).square().sum() / static_cast< double >(theta.rows() - 1);
        est.std_error    = std::sqrt(var / static_cast< double >(theta.rows()));
    }
    const double norm = cpe_only_mse(design);
    est.normalized    = norm > 0.0 ? est.raw / norm : 0.0;
    return est;
}
} // namespace pnm::codebook
