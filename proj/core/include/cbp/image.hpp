#pragma once

#include <vector>

#include "cbp/error.hpp"
#include "cbp/types.hpp"

namespace cbp {

enum class BitDepth { f32, u16, u8 };

const char* bit_depth_name(BitDepth d);
BitDepth bit_depth_from_name(const std::string& s);
int bit_depth_bits(BitDepth d);  // quantization levels = 2^bits - 1; f32 has none

/* A frame holds 1 (gray) or 3 (RGB) planes of double samples in nominal [0,1].
   bit_depth records quantization state; quantized samples sit exactly on
   k/(2^b-1) levels but stay stored as doubles. */
struct Frame {
  std::vector<ImagePlane> planes;
  BitDepth bit_depth = BitDepth::f32;
  int index = 0;

  int rows() const { return planes.empty() ? 0 : int(planes[0].rows()); }
  int cols() const { return planes.empty() ? 0 : int(planes[0].cols()); }
  int channels() const { return int(planes.size()); }
};

void validate_frame(const Frame& f);

/* Rec.601 luma for RGB frames; identity for grayscale. */
Mat luma(const Frame& f);

}  // namespace cbp
