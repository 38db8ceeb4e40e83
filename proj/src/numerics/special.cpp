#include "pnm/numerics/special.hpp"

#include "pnm/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pnm::numerics
{
namespace
{
// Giles, "Approximating the erfinv function" (single-precision coefficients); used as a seed for Halley.
double erf_inv_seed(double x)
{
    double w = -std::log((1.0 - x) * (1.0 + x));
    double p = 0.0;
    if (w < 5.0)
    {
        w -= 2.5;
        p = 2.81022636e-08;
        p = 3.43273939e-07 + p * w;
        p = -3.5233877e-06 + p * w;
        p = -4.39150654e-06 + p * w;
        p = 0.00021858087 + p * w;
        p = -0.00125372503 + p * w;
        p = -0.00417768164 + p * w;
        p = 0.246640727 + p * w;
        p = 1.50140941 + p * w;
    }
    else
    {
        w = std::sqrt(w) - 3.0;
        p = -0.000200214257;
        p = 0.000100950558 + p * w;
        p = 0.00134934322 + p * w;
        p = -0.00367342844 + p * w;
        p = 0.00573950773 + p * w;
        p = -0.0076224613 + p * w;
        p = 0.00943887047 + p * w;
        p = 1.00167406 + p * w;
        p = 2.83297682 + p * w;
    }
    return p * x;
}
} // namespace

double erf_inv(double p)
{
    if (not(std::abs(p) < 1.0))
        throw DomainError("erf_inv: |p| must be < 1, got " + std::to_string(p));
    if (p == 0.0)
        return 0.0;

    double x = erf_inv_seed(p);
    // Halley on f(x) = erf(x) - p, f' = 2/sqrt(pi) exp(-x^2), f''/f' = -2x.
    for (int it = 0; it < 3; ++it)
    {
        const double deriv = 2.0 * std::numbers::inv_sqrtpi * std::exp(-x * x);
        if (deriv == 0.0)
            break;
        const double u = (std::erf(x) - p) / deriv;
        x -= u / (1.0 + x * u);
    }
    return x;
}

double bessel_j0(double x)
{
    return std::cyl_bessel_j(0.0, std::abs(x));
}

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}
} // namespace pnm::numerics
