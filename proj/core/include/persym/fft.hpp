// Thin reentrant wrapper over the multidimensional complex FFT backend.
#pragma once

#include <vector>

#include "persym/common.hpp"

namespace persym::detail {

/// In-place unnormalized DFT of a row-major rank-n array, all axes of equal
/// length.  sign = -1 is the analysis direction (e^{-2pi i jk/N}).
/// Plans are cached per (rank, length, sign); safe to call concurrently.
void fft_nd(std::vector<cplx>& data, int rank, int npoints, int sign);

}  // namespace persym::detail
