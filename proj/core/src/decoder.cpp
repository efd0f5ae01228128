#include "cbp/decoder.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "cbp/fft.hpp"
#include "fft_internal.hpp"

namespace cbp {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_pair(const BlurredPair& pair) {
  validate_frame(pair.public_frame);
  validate_frame(pair.private_frame);
  require(pair.public_frame.rows() == pair.private_frame.rows() &&
              pair.public_frame.cols() == pair.private_frame.cols() &&
              pair.public_frame.channels() == pair.private_frame.channels(),
          Errc::dim_mismatch, "pair frames disagree on dimensions");
  if (pair.kernel_width_hint)
    require(*pair.kernel_width_hint >= 1 && *pair.kernel_width_hint % 2 == 1,
            Errc::invalid_argument, "kernel width hint must be odd and >= 1");
}

void check_search(int smin, int smax) {
  require(smin >= 3 && smax <= 63 && smin <= smax && smin % 2 == 1 && smax % 2 == 1,
          Errc::invalid_argument, "width search range must be odd values within [3,63]");
}

/* width estimate for one slice pair: smallest odd block size whose leading
   Bezout block is numerically singular */
WidthEstimate width_from_slices(const CVec& p, const CVec& q, int smin, int smax, double tau) {
  for (int s = smin; s <= smax; s += 2) {
    CMat block = bezout_leading_block(p, q, s);
    if (numerical_singularity(block, tau).singular) return {s, false};
  }
  return {smax, true};
}

WidthEstimate estimate_from_lumas(const Mat& l1, const Mat& l2, int smin, int smax, double tau) {
  require(std::min(l1.rows(), l1.cols()) > smax, Errc::frame_too_small,
          "frame too small for the width search bound");
  /* For nonnegative content the DC sample is the maximum-energy slice on
     every axis (per-column triangle inequality), so the argmax needs no
     spectra; signed content falls back to the full scan. */
  const bool nonneg = l1.minCoeff() >= 0.0 && l2.minCoeff() >= 0.0;
  WidthEstimate est[2];
  for (Axis axis : {Axis::Z1, Axis::Z2}) {
    const int idx = axis == Axis::Z1 ? 0 : 1;
    CVec p, q;
    if (nonneg) {
      if (axis == Axis::Z1) {
        p = l1.colwise().sum().transpose().cast<cplx>();
        q = l2.colwise().sum().transpose().cast<cplx>();
      } else {
        p = l1.rowwise().sum().cast<cplx>();
        q = l2.rowwise().sum().cast<cplx>();
      }
    } else {
      CMat s1 = detail::axis_spectrum_half(l1, axis);
      CMat s2 = detail::axis_spectrum_half(l2, axis);
      /* maximum joint energy over the unit-circle samples (conjugate half
         carries the same energies) */
      Eigen::Index pick = 0;
      if (axis == Axis::Z1) {
        Vec e = s1.cwiseAbs2().rowwise().sum() + s2.cwiseAbs2().rowwise().sum();
        e.maxCoeff(&pick);
        p = s1.row(pick).transpose();
        q = s2.row(pick).transpose();
      } else {
        Vec e = (s1.cwiseAbs2().colwise().sum() + s2.cwiseAbs2().colwise().sum()).transpose();
        e.maxCoeff(&pick);
        p = s1.col(pick);
        q = s2.col(pick);
      }
    }
    est[idx] = width_from_slices(p, q, smin, smax, tau);
  }
  if (est[0].width != est[1].width)
    fail(Errc::inconsistent_axes, "width estimates disagree: z1 gives " +
                                      std::to_string(est[0].width) + ", z2 gives " +
                                      std::to_string(est[1].width));
  return {est[0].width, est[0].clamped && est[1].clamped};
}

/* cofactor solves for all t slices of one axis; sampling is done by the
   caller so evaluation and solving can be timed as separate stages */
ScaledKernelTransform solve_axis(const CMat& s1, const CMat& s2, int t, Axis axis,
                                 double gap_threshold) {
  ScaledKernelTransform out;
  out.axis = axis;
  out.values = CMat(t, t);
  out.gaps = Vec(t);
  for (int i = 0; i < t; ++i) {
    CVec p = axis == Axis::Z1 ? CVec(s1.row(i).transpose()) : CVec(s1.col(i));
    CVec q = axis == Axis::Z1 ? CVec(s2.row(i).transpose()) : CVec(s2.col(i));
    CofactorSolution sol;
    try {
      sol = cofactor_null_solve(p, q, t, gap_threshold);
    } catch (const Error& e) {
      if (e.code() != Errc::ill_conditioned) throw;
      fail(Errc::ill_conditioned_slice,
           std::string(axis_name(axis)) + " slice " + std::to_string(i) + ": " + e.what());
    }
    double norm = sol.k1.norm();
    if (norm == 0.0)
      fail(Errc::ill_conditioned_slice, std::string(axis_name(axis)) + " slice " +
                                            std::to_string(i) + ": vanishing cofactor estimate");
    sol.k1 /= norm;
    if (axis == Axis::Z1)
      out.values.row(i) = sol.k1.transpose();
    else
      out.values.col(i) = sol.k1;
    out.gaps(i) = sol.gap;
  }
  return out;
}

CMat dft_matrix(int t) {
  constexpr double tau = 2.0 * std::numbers::pi;
  CMat w(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) w(i, j) = std::polar(1.0, -tau * double((i * j) % t) / double(t));
  return w;
}

ScaleResolution resolve_completed(const CMat& a_spec, const CMat& b_spec) {
  const int t = int(a_spec.rows());
  require(a_spec.cols() == t && b_spec.rows() == t && b_spec.cols() == t, Errc::dim_mismatch,
          "spectrum estimates must be square and equal-sized");
  CMat sys = CMat::Zero(Eigen::Index(t) * t, 2 * t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) {
      Eigen::Index r = Eigen::Index(i) * t + j;
      sys(r, i) = -b_spec(i, j);      // lambda_i coefficient
      sys(r, t + j) = a_spec(i, j);   // mu_j coefficient
    }
  CVec x = homogeneous_lsq(sys);
  ScaleResolution out;
  out.lambda = x.head(t);
  out.mu = x.tail(t);
  out.residual = (sys * x).norm();
  double mx = x.cwiseAbs().maxCoeff();
  double mn = x.cwiseAbs().minCoeff();
  if (mx == 0.0 || mn < 1e-10 * mx)
    fail(Errc::degenerate_scales, "near-zero per-slice scale (ratio " +
                                      std::to_string(mx == 0.0 ? 0.0 : mn / mx) + ")");
  return out;
}

/* rotate a complex kernel estimate to its real-positive orientation, check it
   is essentially real, clamp and normalize */
Mat realize_kernel(CMat k, double max_imag_energy, double negative_weight_tol) {
  cplx mass = k.sum();
  require(std::abs(mass) > 0.0, Errc::non_real_kernel, "kernel estimate has vanishing mass");
  k *= std::conj(mass) / std::abs(mass);
  double total = k.cwiseAbs2().sum();
  double imag = k.imag().cwiseAbs2().sum();
  require(total > 0.0, Errc::non_real_kernel, "kernel estimate is zero");
  if (imag > max_imag_energy * total)
    fail(Errc::non_real_kernel, "imaginary energy fraction " + std::to_string(imag / total));
  Mat w = k.real();
  double mx = w.maxCoeff();
  require(mx > 0.0, Errc::non_real_kernel, "kernel estimate has no positive weight");
  if (w.minCoeff() < -negative_weight_tol * mx)
    fail(Errc::non_real_kernel,
         "negative weight beyond tolerance (min " + std::to_string(w.minCoeff() / mx) + " of max)");
  w = w.cwiseMax(0.0);
  return w / w.sum();
}

struct DeblurPlan {
  CMat kernel_half;  // half spectrum of the kernel zero-padded to the work grid
  int work_rows = 0, work_cols = 0;  // transform grid, kept 2/3/5/7-smooth
  double epsilon = 0.0;
};

/* The division runs on a smooth grid at least as large as the blurred frame;
   the full convolution fits, so circular equals linear and the latent sits in
   the top-left corner of the inverse transform. */
DeblurPlan make_deblur_plan(int rows, int cols, const BlurKernel& k,
                            std::optional<double> epsilon) {
  const int t = k.width;
  require(rows >= t && cols >= t, Errc::frame_too_small, "blurred frame smaller than the kernel");
  DeblurPlan plan;
  plan.work_rows = detail::friendly_size(rows);
  plan.work_cols = detail::friendly_size(cols);
  Mat pad = Mat::Zero(plan.work_rows, plan.work_cols);
  pad.topLeftCorner(t, t) = k.weights;
  int full_rows = 0;
  plan.kernel_half = detail::fft2_real_half(pad, &full_rows);
  double peak = plan.kernel_half.cwiseAbs().maxCoeff();
  plan.epsilon = epsilon.value_or(1e-8 * peak * peak);
  require(plan.epsilon >= 0.0, Errc::invalid_argument, "epsilon must be nonnegative");
  return plan;
}

Mat run_deblur(const Mat& blurred, const DeblurPlan& plan, int t) {
  Mat padded = Mat::Zero(plan.work_rows, plan.work_cols);
  padded.topLeftCorner(blurred.rows(), blurred.cols()) = blurred;
  int rows = 0;
  CMat fb = detail::fft2_real_half(padded, &rows);
  CMat fl = (fb.array() * plan.kernel_half.conjugate().array() /
             (plan.kernel_half.cwiseAbs2().array() + plan.epsilon))
                .matrix();
  Mat full = detail::ifft2_real_half(fl, rows);
  return full.topLeftCorner(blurred.rows() - t + 1, blurred.cols() - t + 1);
}

}  // namespace

WidthEstimate estimate_kernel_width(const BlurredPair& pair, int search_min, int search_max,
                                    double tau) {
  check_pair(pair);
  check_search(search_min, search_max);
  require(tau > 0.0 && tau < 1.0, Errc::invalid_argument, "tau must lie in (0,1)");
  return estimate_from_lumas(luma(pair.public_frame), luma(pair.private_frame), search_min,
                             search_max, tau);
}

ScaledKernelTransform sample_cofactors(const BlurredPair& pair, int width, Axis axis,
                                       double gap_threshold) {
  check_pair(pair);
  require(width >= 1 && width % 2 == 1, Errc::invalid_argument, "width must be odd and >= 1");
  Mat l1 = luma(pair.public_frame);
  Mat l2 = luma(pair.private_frame);
  require(l1.rows() >= width && l1.cols() >= width, Errc::frame_too_small,
          "frame smaller than the kernel width");
  CMat s1 = axis_roots_dft(l1, axis, width);
  CMat s2 = axis_roots_dft(l2, axis, width);
  return solve_axis(s1, s2, width, axis, gap_threshold);
}

CMat complete_to_spectrum(const ScaledKernelTransform& skt) {
  const int t = int(skt.values.rows());
  require(skt.values.cols() == t && t >= 1, Errc::dim_mismatch,
          "scaled kernel transform must be square");
  CMat w = dft_matrix(t);
  return skt.axis == Axis::Z1 ? CMat(skt.values * w) : CMat(w * skt.values);
}

ScaleResolution resolve_scales(const ScaledKernelTransform& a, const ScaledKernelTransform& b) {
  require(a.axis == Axis::Z1 && b.axis == Axis::Z2, Errc::invalid_argument,
          "resolve_scales expects a z1 transform and a z2 transform");
  require(a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols(),
          Errc::dim_mismatch, "transforms disagree on size");
  return resolve_completed(complete_to_spectrum(a), complete_to_spectrum(b));
}

BlurKernel assemble_kernel(const CMat& a_spectrum, const CMat& b_spectrum,
                           const ScaleResolution& scales, double max_imag_energy,
                           double negative_weight_tol) {
  const int t = int(a_spectrum.rows());
  require(a_spectrum.cols() == t && b_spectrum.rows() == t && b_spectrum.cols() == t,
          Errc::dim_mismatch, "spectrum estimates must be square and equal-sized");
  require(scales.lambda.size() == t && scales.mu.size() == t, Errc::dim_mismatch,
          "scale vectors must match the kernel width");
  require(scales.lambda.cwiseAbs().minCoeff() > 0.0 && scales.mu.cwiseAbs().minCoeff() > 0.0,
          Errc::degenerate_scales, "zero scale entry");
  CMat ka = scales.lambda.cwiseInverse().asDiagonal() * a_spectrum;
  CMat kb = b_spectrum * scales.mu.cwiseInverse().asDiagonal();
  Mat wa = realize_kernel(ifft2(ka), max_imag_energy, negative_weight_tol);
  Mat wb = realize_kernel(ifft2(kb), max_imag_energy, negative_weight_tol);
  return BlurKernel{t, 0.5 * (wa + wb)};
}

Mat spectral_deblur(const Mat& blurred, const BlurKernel& k1, double epsilon) {
  validate_kernel(k1);
  require(epsilon >= 0.0, Errc::invalid_argument, "epsilon must be nonnegative");
  DeblurPlan plan = make_deblur_plan(int(blurred.rows()), int(blurred.cols()), k1, epsilon);
  return run_deblur(blurred, plan, k1.width);
}

DecodedFrame decode_frame(const BlurredPair& pair, const DecodeConfig& cfg) {
  check_pair(pair);
  check_search(cfg.search_min, cfg.search_max);
  require(cfg.tau > 0.0 && cfg.tau < 1.0, Errc::invalid_argument, "tau must lie in (0,1)");

  StageTimings tm;
  const auto t_begin = Clock::now();

  /* polynomial evaluation: luma prep now, root-of-unity sampling below */
  auto t0 = Clock::now();
  Mat l1, l2;
  try {
    l1 = luma(pair.public_frame);
    l2 = luma(pair.private_frame);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("polynomial_evaluation: ") + e.what());
  }
  tm.polynomial_evaluation_ms += ms_since(t0);

  /* kernel degree estimation (skipped under a trusted hint) */
  t0 = Clock::now();
  WidthEstimate est;
  if (cfg.trust_hint && pair.kernel_width_hint) {
    est.width = *pair.kernel_width_hint;
    est.clamped = false;
    require(est.width >= 1 && est.width % 2 == 1 && est.width <= 63, Errc::invalid_argument,
            "kernel width hint must be odd, within [1,63]");
  } else {
    try {
      est = estimate_from_lumas(l1, l2, cfg.search_min, cfg.search_max, cfg.tau);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("kernel_degree_estimation: ") + e.what());
    }
  }
  const int t = est.width;
  tm.kernel_degree_estimation_ms += ms_since(t0);

  /* polynomial evaluation, continued: slices at the t-th roots of unity */
  t0 = Clock::now();
  CMat s1z1, s2z1, s1z2, s2z2;
  try {
    require(l1.rows() >= t && l1.cols() >= t, Errc::frame_too_small,
            "frame smaller than the kernel width");
    s1z1 = axis_roots_dft(l1, Axis::Z1, t);
    s2z1 = axis_roots_dft(l2, Axis::Z1, t);
    s1z2 = axis_roots_dft(l1, Axis::Z2, t);
    s2z2 = axis_roots_dft(l2, Axis::Z2, t);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("polynomial_evaluation: ") + e.what());
  }
  tm.polynomial_evaluation_ms += ms_since(t0);

  /* 1D kernel estimation: the 2t cofactor null solves */
  t0 = Clock::now();
  ScaledKernelTransform a, b;
  try {
    a = solve_axis(s1z1, s2z1, t, Axis::Z1, cfg.gap_threshold);
    b = solve_axis(s1z2, s2z2, t, Axis::Z2, cfg.gap_threshold);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("kernel_estimation_1d: ") + e.what());
  }
  tm.kernel_estimation_1d_ms += ms_since(t0);

  /* 2D kernel estimation and FFT deblur */
  t0 = Clock::now();
  DecodedFrame out;
  try {
    CMat a_spec = complete_to_spectrum(a);
    CMat b_spec = complete_to_spectrum(b);
    ScaleResolution scales = resolve_completed(a_spec, b_spec);
    out.kernel_estimate =
        assemble_kernel(a_spec, b_spec, scales, cfg.max_imag_energy, cfg.negative_weight_tol);
    DeblurPlan plan = make_deblur_plan(int(l1.rows()), int(l1.cols()), out.kernel_estimate,
                                       cfg.epsilon);
    for (const auto& plane : pair.public_frame.planes)
      out.latent.planes.push_back(run_deblur(plane, plan, t));
    out.latent.bit_depth = BitDepth::f32;
    out.latent.index = pair.public_frame.index;
  } catch (const Error& e) {
    throw Error(e.code(), std::string("kernel_estimation_2d_fft: ") + e.what());
  }
  tm.kernel_estimation_2d_fft_ms += ms_since(t0);
  tm.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - t_begin).count();

  out.width_used = t;
  out.width_clamped = est.clamped;
  out.stage_timings = tm;
  if (cfg.validate) {
    double num = 0.0, den = 0.0;
    for (size_t c = 0; c < pair.public_frame.planes.size(); ++c) {
      Mat reblur = conv2_full(out.latent.planes[c], out.kernel_estimate.weights);
      num += (reblur - pair.public_frame.planes[c]).squaredNorm();
      den += pair.public_frame.planes[c].squaredNorm();
    }
    require(den > 0.0, Errc::degenerate_input, "public frame is identically zero");
    out.validation_residual = std::sqrt(num / den);
  }
  return out;
}

double validate_pair(const BlurredPair& pair, const BlurKernel& k1_hat,
                     const BlurKernel& k2_hat) {
  check_pair(pair);
  validate_kernel(k1_hat);
  validate_kernel(k2_hat);
  require(k1_hat.width == k2_hat.width, Errc::dim_mismatch, "kernel widths differ");
  double num = 0.0, den = 0.0;
  for (size_t c = 0; c < pair.public_frame.planes.size(); ++c) {
    Mat lhs = conv2_full(pair.public_frame.planes[c], k2_hat.weights);
    Mat rhs = conv2_full(pair.private_frame.planes[c], k1_hat.weights);
    num += (lhs - rhs).squaredNorm();
    den += lhs.squaredNorm();
  }
  require(den > 0.0, Errc::degenerate_input, "cross-convolution is identically zero");
  return std::sqrt(num / den);
}

}  // namespace cbp
