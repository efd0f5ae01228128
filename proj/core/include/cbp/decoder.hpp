#pragma once

#include <optional>

#include "cbp/encoder.hpp"
#include "cbp/poly.hpp"

namespace cbp {

struct DecodeConfig {
  int search_min = 9;   // kernel width search clamp, odd
  int search_max = 25;
  double tau = 1e-6;    // relative singularity threshold for degree estimation
  std::optional<double> epsilon;  // spectral guard; default 1e-8 * (peak kernel spectral magnitude)^2
  double gap_threshold = kDefaultGapThreshold;
  bool trust_hint = false;        // use the pair's width hint and skip estimation
  double max_imag_energy = 0.01;  // kernel assembly diagnostics
  double negative_weight_tol = 0.01;
  bool validate = true;           // compute validation_residual (not timed as a stage)
};

struct WidthEstimate {
  int width = 0;
  bool clamped = false;  // no tested block was singular; width = search_max
};

/* Kernel width from Bezout leading-block singularity of the maximum-energy
   unit-circle slice pair, estimated independently on both axes. */
WidthEstimate estimate_kernel_width(const BlurredPair& pair, int search_min, int search_max,
                                    double tau);

struct ScaledKernelTransform {
  Axis axis = Axis::Z1;
  CMat values;  // t x t; rows (Z1) or columns (Z2) are unit-norm cofactor solutions
  Vec gaps;     // per-slice conditioning diagnostics
};

/* Public-kernel cofactor solutions at the t-th roots of unity along one axis,
   each known only up to scale. */
ScaledKernelTransform sample_cofactors(const BlurredPair& pair, int width, Axis axis,
                                       double gap_threshold = kDefaultGapThreshold);

/* t-point DFT along the unsolved axis: lifts per-slice solutions onto the
   full t x t kernel spectrum grid (still scaled per row/column). */
CMat complete_to_spectrum(const ScaledKernelTransform& skt);

struct ScaleResolution {
  CVec lambda, mu;  // per-row (z1) and per-column (z2) scales, unit joint norm
  double residual = 0.0;
};

/* Recover the unknown scales from the t^2 consistency equations
   mu_j * A'[i][j] - lambda_i * B'[i][j] = 0. */
ScaleResolution resolve_scales(const ScaledKernelTransform& a, const ScaledKernelTransform& b);

/* Unscale both spectrum estimates, invert to the spatial kernel, and fuse. */
BlurKernel assemble_kernel(const CMat& a_spectrum, const CMat& b_spectrum,
                           const ScaleResolution& scales, double max_imag_energy = 0.01,
                           double negative_weight_tol = 0.01);

/* Wiener-style spectral division at the blurred frame's size, cropped to the
   latent extent. epsilon = 0 gives exact polynomial division on exact data. */
Mat spectral_deblur(const Mat& blurred, const BlurKernel& k1, double epsilon);

struct StageTimings {
  double polynomial_evaluation_ms = 0.0;
  double kernel_degree_estimation_ms = 0.0;
  double kernel_estimation_1d_ms = 0.0;
  double kernel_estimation_2d_fft_ms = 0.0;
  double total_ms = 0.0;
};

struct DecodedFrame {
  Frame latent;
  BlurKernel kernel_estimate;  // public-side kernel
  int width_used = 0;
  bool width_clamped = false;
  StageTimings stage_timings;
  double validation_residual = 0.0;
};

DecodedFrame decode_frame(const BlurredPair& pair, const DecodeConfig& cfg = {});

/* Cross-convolution consistency: |B1 (*) k2 - B2 (*) k1| / |B1 (*) k2|. */
double validate_pair(const BlurredPair& pair, const BlurKernel& k1_hat,
                     const BlurKernel& k2_hat);

}  // namespace cbp
