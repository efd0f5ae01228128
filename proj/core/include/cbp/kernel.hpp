#pragma once

#include <cstdint>

#include "cbp/error.hpp"
#include "cbp/types.hpp"

namespace cbp {

/* Square blur kernel, width x width, nonnegative weights summing to 1.
   Width is odd; width 1 is the identity kernel (useful degenerate case),
   generated pairs use widths 3..63. */
struct BlurKernel {
  int width = 1;
  Mat weights;
};

void validate_kernel(const BlurKernel& k, double sum_tol = 1e-9);

struct CoprimePair {
  BlurKernel k1, k2;
  double coprimality_margin = 0.0;
  std::uint64_t seed = 0;
};

}  // namespace cbp
