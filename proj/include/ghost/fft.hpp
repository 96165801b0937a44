#pragma once

#include "ghost/grid.hpp"

namespace ghost::detail {

// In-place unnormalized 2-D DFT (FFTW backend). Plans are cached per shape
// and created under a lock; execution is lock-free and thread-safe as long
// as each thread transforms its own buffer. Plans use FFTW_ESTIMATE so the
// chosen algorithm, and therefore the bit pattern of results, does not vary
// from run to run.
void fft2(ComplexGrid& g, bool inverse);

}  // namespace ghost::detail
