#pragma once

#include "cbp/image.hpp"

namespace cbp {

// PSNR in dB against a unit peak; +infinity when the frames are identical.
double psnr(const Frame& reference, const Frame& test);

double psnr(const Mat& reference, const Mat& test);

}  // namespace cbp
