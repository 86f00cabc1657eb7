#pragma once

#include <vector>

#include "cornex/grid.hpp"

namespace cornex::detail {

/// In-place unnormalized DFT over the listed axes; sign +1 computes
/// sum_k f_k e^{+2 pi i k m / N}, sign -1 the conjugate kernel.
void fft_axes(cplx* data, const TensorGrid& g, const std::vector<int>& axes, int sign);

}  // namespace cornex::detail
