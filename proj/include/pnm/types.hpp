#ifndef PNM_TYPES_HPP
#define PNM_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <vector>

namespace pnm
{
template < typename Scalar >
using ComplexVector = Eigen::Matrix< std::complex< Scalar >, Eigen::Dynamic, 1 >;

template < typename Scalar >
using RealVector = Eigen::Matrix< Scalar, Eigen::Dynamic, 1 >;

using cd     = std::complex< double >;
using CVec   = ComplexVector< double >;
using RVec   = RealVector< double >;
using CMat   = Eigen::MatrixXcd;
using RMat   = Eigen::MatrixXd;
using RowMat = Eigen::Matrix< double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor >;

using Bits    = std::vector< unsigned char >;
using Indices = std::vector< int >;

inline constexpr double kPi = std::numbers::pi;
} // namespace pnm

#endif // PNM_TYPES_HPP
