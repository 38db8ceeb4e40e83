#ifndef PNM_NUMERICS_HPP
#define PNM_NUMERICS_HPP

#include "pnm/numerics/fft.hpp"
#include "pnm/numerics/random.hpp"
#include "pnm/numerics/special.hpp"

#endif // PNM_NUMERICS_HPP
