#include "pnm/numerics/fft.hpp"

namespace pnm::numerics
{
template class FftPlan< float >;
template class FftPlan< double >;
} // namespace pnm::numerics
