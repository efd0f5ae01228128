#include "cbp/metrics.hpp"

#include <cmath>
#include <limits>

#include "cbp/error.hpp"

namespace cbp {
namespace {

double psnr_from(double sq_sum, double count) {
  if (sq_sum == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(count / sq_sum);
}

}  // namespace

double psnr(const Mat& reference, const Mat& test) {
  require(reference.rows() == test.rows() && reference.cols() == test.cols(), Errc::dim_mismatch,
          "psnr operands differ in shape");
  require(reference.size() > 0, Errc::invalid_argument, "psnr of empty image");
  return psnr_from((reference - test).squaredNorm(), static_cast<double>(reference.size()));
}

double psnr(const Frame& reference, const Frame& test) {
  validate_frame(reference);
  validate_frame(test);
  require(reference.channels() == test.channels() && reference.rows() == test.rows() &&
              reference.cols() == test.cols(),
          Errc::dim_mismatch, "psnr operands differ in shape");
  double sq = 0.0;
  for (int c = 0; c < reference.channels(); ++c)
    sq += (reference.planes[static_cast<std::size_t>(c)] - test.planes[static_cast<std::size_t>(c)])
              .squaredNorm();
  return psnr_from(sq, static_cast<double>(reference.rows()) * reference.cols() *
                           reference.channels());
}

}  // namespace cbp
