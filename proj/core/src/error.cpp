#include "cbp/error.hpp"

namespace cbp {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::non_unit_sample_point: return "NonUnitSamplePoint";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::ill_conditioned: return "IllConditioned";
    case Errc::coprimality_failure: return "CoprimalityFailure";
    case Errc::frame_too_small: return "FrameTooSmall";
    case Errc::range_exceeded: return "RangeExceeded";
    case Errc::not_quantized: return "NotQuantized";
    case Errc::inconsistent_axes: return "InconsistentAxes";
    case Errc::ill_conditioned_slice: return "IllConditionedSlice";
    case Errc::degenerate_scales: return "DegenerateScales";
    case Errc::non_real_kernel: return "NonRealKernel";
    case Errc::dim_mismatch: return "DimMismatch";
    case Errc::io_failure: return "IoFailure";
    case Errc::corrupt_manifest: return "CorruptManifest";
    case Errc::missing_frame: return "MissingFrame";
    case Errc::format_violation: return "FormatViolation";
    case Errc::pair_mismatch: return "PairMismatch";
  }
  return "Error";
}

}  // namespace cbp
