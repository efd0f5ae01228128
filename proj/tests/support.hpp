#pragma once

// Shared helpers for the test binaries: deterministic frame builders and
// scale-alignment utilities for comparing quantities that are only defined
// up to a common complex factor.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "cbp/encoder.hpp"
#include "cbp/image.hpp"
#include "cbp/types.hpp"

namespace testsup {

inline cbp::Frame gray_frame(const cbp::Mat& plane, cbp::BitDepth depth = cbp::BitDepth::f32) {
  cbp::Frame f;
  f.planes = {plane};
  f.bit_depth = depth;
  return f;
}

inline cbp::Frame rgb_frame(const cbp::Mat& r, const cbp::Mat& g, const cbp::Mat& b) {
  cbp::Frame f;
  f.planes = {r, g, b};
  return f;
}

inline cbp::Mat random_mat(int rows, int cols, std::uint64_t seed, double lo = 0.0,
                           double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  cbp::Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline cbp::Mat random_int_mat(int rows, int cols, std::uint64_t seed, int lo, int hi) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(lo, hi);
  cbp::Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = double(dist(rng));
  return m;
}

inline cbp::CVec random_cvec(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  cbp::CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = cbp::cplx(dist(rng), dist(rng));
  return v;
}

inline double max_abs(const cbp::Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const cbp::Mat& a, const cbp::Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double rel_diff(const cbp::Mat& a, const cbp::Mat& b) {
  return (a - b).norm() / b.norm();
}

/* Best single complex scale aligning est to ref in least squares, applied to
   the stacked pair; returns the max abs deviation after alignment. */
inline double aligned_error(const cbp::CVec& est1, const cbp::CVec& est2, const cbp::CVec& ref1,
                            const cbp::CVec& ref2) {
  cbp::CVec est(est1.size() + est2.size()), ref(ref1.size() + ref2.size());
  est << est1, est2;
  ref << ref1, ref2;
  const cbp::cplx c = est.dot(ref) / est.dot(est);  // Eigen dot conjugates the left argument
  return (c * est - ref).cwiseAbs().maxCoeff();
}

inline double aligned_error(const cbp::CVec& est, const cbp::CVec& ref) {
  const cbp::cplx c = est.dot(ref) / est.dot(est);
  return (c * est - ref).cwiseAbs().maxCoeff();
}

/* Identity (width 1) blur pair: encoding with it reproduces the latent. */
inline cbp::CoprimePair identity_pair() {
  cbp::CoprimePair p;
  p.k1.width = 1;
  p.k1.weights = cbp::Mat::Ones(1, 1);
  p.k2 = p.k1;
  p.coprimality_margin = 1.0;
  return p;
}

/* Blurred pair assembled from explicit frames (a hand-built scene). */
inline cbp::BlurredPair make_pair(const cbp::Mat& pub, const cbp::Mat& prv,
                                  const std::string& id = "test-pair") {
  cbp::BlurredPair bp;
  bp.public_frame = gray_frame(pub);
  bp.private_frame = gray_frame(prv);
  bp.pair_id = id;
  return bp;
}

/* Direct quadruple-loop convolution in long double, written independently of
   the library's accumulation order. */
inline cbp::Mat direct_conv2(const cbp::Mat& a, const cbp::Mat& b) {
  const int mo = int(a.rows() + b.rows()) - 1;
  const int no = int(a.cols() + b.cols()) - 1;
  cbp::Mat out(mo, no);
  for (int i = 0; i < mo; ++i)
    for (int j = 0; j < no; ++j) {
      long double acc = 0.0L;
      for (int m = 0; m < a.rows(); ++m)
        for (int n = 0; n < a.cols(); ++n) {
          const int k = i - m, l = j - n;
          if (k >= 0 && k < b.rows() && l >= 0 && l < b.cols())
            acc += (long double)(a(m, n)) * (long double)(b(k, l));
        }
      out(i, j) = double(acc);
    }
  return out;
}

}  // namespace testsup
