#ifndef PNM_NUMERICS_SPECIAL_HPP
#define PNM_NUMERICS_SPECIAL_HPP

namespace pnm::numerics
{
/// Inverse error function on (-1, 1); erf(erf_inv(p)) == p to ~1e-15. Throws DomainError for |p| >= 1.
double erf_inv(double p);

/// Zeroth-order Bessel function of the first kind.
double bessel_j0(double x);

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
double q_function(double x);
} // namespace pnm::numerics

#endif // PNM_NUMERICS_SPECIAL_HPP
