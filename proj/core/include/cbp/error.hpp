#pragma once

#include <stdexcept>
#include <string>

namespace cbp {

enum class Errc {
  invalid_argument,
  non_unit_sample_point,
  degenerate_input,
  ill_conditioned,
  coprimality_failure,
  frame_too_small,
  range_exceeded,
  not_quantized,
  inconsistent_axes,
  ill_conditioned_slice,
  degenerate_scales,
  non_real_kernel,
  dim_mismatch,
  io_failure,
  corrupt_manifest,
  missing_frame,
  format_violation,
  pair_mismatch,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace cbp
