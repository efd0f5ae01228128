#include "cbp/encoder.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "cbp/poly.hpp"
#include "rng.hpp"

namespace cbp {
namespace {

/* sigma_min/sigma_max of the Sylvester matrix of one restricted pair, with
   trailing near-zero coefficients trimmed so structured kernels (deltas) do
   not produce spurious zero columns. */
double restriction_margin(const CVec& p, const CVec& q) {
  int dp = numerical_degree(p), dq = numerical_degree(q);
  if (dp < 0 || dq < 0) return 0.0;
  if (dp == 0 && dq == 0) return 1.0;  // nonzero constants share no root
  CMat s = sylvester_matrix(p.head(dp + 1), q.head(dq + 1));
  Eigen::JacobiSVD<CMat> svd(s);
  const Vec& sv = svd.singularValues();
  return sv(0) == 0.0 ? 0.0 : sv(sv.size() - 1) / sv(0);
}

BlurKernel draw_kernel(int width, detail::UniformRng& rng) {
  Mat w(width, width);
  for (int n = 0; n < width; ++n)
    for (int m = 0; m < width; ++m) w(m, n) = rng.next();
  double s = w.sum();
  require(s > 0.0, Errc::degenerate_input, "drew an all-zero kernel");
  BlurKernel k{width, w / s};
  return k;
}

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

}  // namespace

double coprimality_check(const BlurKernel& k1, const BlurKernel& k2, int trials) {
  validate_kernel(k1);
  validate_kernel(k2);
  require(k1.width == k2.width, Errc::dim_mismatch, "kernel widths differ");
  require(trials >= 1, Errc::invalid_argument, "trials must be >= 1");
  /* fixed seed: the margin of a given pair is a pure function of the pair */
  detail::UniformRng rng(0x5ca1ab1e0ddba11ull);
  constexpr double tau = 2.0 * std::numbers::pi;
  double margin = 1.0;
  for (int trial = 0; trial < trials; ++trial) {
    cplx w = std::polar(1.0, tau * rng.next());
    const cplx pts[1] = {w};
    for (Axis axis : {Axis::Z1, Axis::Z2}) {
      CVec p = axis_dft(k1.weights, axis, pts).slices[0];
      CVec q = axis_dft(k2.weights, axis, pts).slices[0];
      margin = std::min(margin, restriction_margin(p, q));
    }
  }
  return margin;
}

CoprimePair generate_coprime_pair(int width, std::uint64_t seed, int max_retries,
                                  double margin_threshold, int trials) {
  require(width >= 3 && width <= 63 && width % 2 == 1, Errc::invalid_argument,
          "kernel width must be odd, within [3,63]");
  require(max_retries >= 1, Errc::invalid_argument, "max_retries must be >= 1");
  require(margin_threshold > 0.0, Errc::invalid_argument, "margin threshold must be positive");
  detail::UniformRng rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    BlurKernel k1 = draw_kernel(width, rng);
    BlurKernel k2 = draw_kernel(width, rng);
    double margin = coprimality_check(k1, k2, trials);
    if (margin > margin_threshold) return CoprimePair{std::move(k1), std::move(k2), margin, seed};
  }
  fail(Errc::coprimality_failure, "no coprime pair of width " + std::to_string(width) +
                                      " within " + std::to_string(max_retries) + " draws");
}

BlurredPair encode_frame(const Frame& latent, const CoprimePair& pair) {
  validate_frame(latent);
  validate_kernel(pair.k1);
  validate_kernel(pair.k2);
  require(pair.k1.width == pair.k2.width, Errc::dim_mismatch, "kernel widths differ");
  const int t = pair.k1.width;
  require(latent.rows() >= t && latent.cols() >= t, Errc::frame_too_small,
          "latent frame smaller than the blur kernel");
  BlurredPair out;
  out.public_frame.bit_depth = BitDepth::f32;
  out.public_frame.index = latent.index;
  out.private_frame.bit_depth = BitDepth::f32;
  out.private_frame.index = latent.index;
  for (const auto& plane : latent.planes) {
    out.public_frame.planes.push_back(conv2_full(plane, pair.k1.weights));
    out.private_frame.planes.push_back(conv2_full(plane, pair.k2.weights));
  }
  out.kernel_width_hint = t;
  out.pair_id = hex16(detail::splitmix64(pair.seed ^ (0xb1e55ed * std::uint64_t(t))));
  return out;
}

Frame quantize_frame(const Frame& f, BitDepth depth) {
  validate_frame(f);
  require(depth != BitDepth::f32, Errc::invalid_argument, "quantization depth must be u8 or u16");
  const double maxv = double((1u << bit_depth_bits(depth)) - 1);
  Frame out = f;
  out.bit_depth = depth;
  for (auto& plane : out.planes) {
    require(plane.minCoeff() >= -1e-9 && plane.maxCoeff() <= 1.0 + 1e-9, Errc::range_exceeded,
            "samples outside [0,1]");
    plane = plane.unaryExpr([maxv](double x) {
      double c = std::min(1.0, std::max(0.0, x));
      return std::round(c * maxv) / maxv;
    });
  }
  return out;
}

Frame degrade_bits(const Frame& f, int drop) {
  validate_frame(f);
  require(f.bit_depth != BitDepth::f32, Errc::not_quantized,
          "bit-precision degradation needs a quantized frame");
  const int bits = bit_depth_bits(f.bit_depth);
  require(drop >= 0 && drop < bits, Errc::invalid_argument,
          "drop must lie in [0, bit width)");
  if (drop == 0) return f;
  const double maxv = double((1u << bits) - 1);
  const std::uint32_t mask = ~((1u << drop) - 1u);
  Frame out = f;
  for (auto& plane : out.planes)
    plane = plane.unaryExpr([maxv, mask](double x) {
      auto k = std::uint32_t(std::lround(x * maxv));
      return double(k & mask) / maxv;
    });
  return out;
}

}  // namespace cbp
