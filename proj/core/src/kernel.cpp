#include "cbp/kernel.hpp"

#include <cmath>

namespace cbp {

void validate_kernel(const BlurKernel& k, double sum_tol) {
  require(k.width >= 1 && k.width % 2 == 1, Errc::invalid_argument,
          "kernel width must be odd and >= 1");
  require(k.weights.rows() == k.width && k.weights.cols() == k.width, Errc::dim_mismatch,
          "kernel weights must be width x width");
  require(k.weights.allFinite(), Errc::invalid_argument, "kernel weights must be finite");
  require(k.weights.minCoeff() >= 0.0, Errc::invalid_argument,
          "kernel weights must be nonnegative");
  require(std::abs(k.weights.sum() - 1.0) <= sum_tol, Errc::invalid_argument,
          "kernel weights must sum to 1");
}

}  // namespace cbp
