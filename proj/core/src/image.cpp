#include "cbp/image.hpp"

namespace cbp {

const char* bit_depth_name(BitDepth d) {
  switch (d) {
    case BitDepth::f32: return "float32";
    case BitDepth::u16: return "u16";
    case BitDepth::u8: return "u8";
  }
  return "float32";
}

BitDepth bit_depth_from_name(const std::string& s) {
  if (s == "float32") return BitDepth::f32;
  if (s == "u16") return BitDepth::u16;
  if (s == "u8") return BitDepth::u8;
  fail(Errc::invalid_argument, "unknown bit depth '" + s + "'");
}

int bit_depth_bits(BitDepth d) {
  switch (d) {
    case BitDepth::f32: return 0;
    case BitDepth::u16: return 16;
    case BitDepth::u8: return 8;
  }
  return 0;
}

void validate_frame(const Frame& f) {
  require(f.channels() == 1 || f.channels() == 3, Errc::dim_mismatch,
          "frame must have 1 or 3 planes");
  for (const auto& p : f.planes) {
    require(p.rows() == f.rows() && p.cols() == f.cols(), Errc::dim_mismatch,
            "frame planes disagree on dimensions");
    require(p.rows() >= 1 && p.cols() >= 1, Errc::dim_mismatch, "empty frame plane");
    require(p.allFinite(), Errc::range_exceeded, "frame contains non-finite samples");
  }
}

Mat luma(const Frame& f) {
  validate_frame(f);
  if (f.channels() == 1) return f.planes[0];
  return 0.299 * f.planes[0] + 0.587 * f.planes[1] + 0.114 * f.planes[2];
}

}  // namespace cbp
