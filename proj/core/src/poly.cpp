#include "cbp/poly.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace cbp {
namespace {

inline cplx coef(const CVec& v, Eigen::Index i) {
  return (i >= 0 && i < v.size()) ? v(i) : cplx(0.0, 0.0);
}

bool all_zero(const CVec& v) { return v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0; }

/* Rotate so the largest-magnitude entry is real positive; deterministic
   representative of the phase family. */
void normalize_phase(CVec& x) {
  Eigen::Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  double a = std::abs(x(imax));
  if (a > 0.0) x *= std::conj(x(imax)) / a;
}

}  // namespace

Mat conv2_full(const Mat& a, const Mat& b) {
  require(a.size() > 0 && b.size() > 0, Errc::dim_mismatch, "conv2_full needs nonempty inputs");
  const auto& big = a.size() >= b.size() ? a : b;
  const auto& small = a.size() >= b.size() ? b : a;
  Mat out = Mat::Zero(a.rows() + b.rows() - 1, a.cols() + b.cols() - 1);
  for (Eigen::Index n = 0; n < small.cols(); ++n)
    for (Eigen::Index m = 0; m < small.rows(); ++m) {
      double w = small(m, n);
      if (w != 0.0) out.block(m, n, big.rows(), big.cols()) += w * big;
    }
  return out;
}

SpectralSliceSet axis_dft(const Mat& plane, Axis axis, std::span<const cplx> points) {
  require(plane.size() > 0, Errc::invalid_argument, "axis_dft needs a nonempty plane");
  for (const cplx& w : points)
    require(std::abs(std::abs(w) - 1.0) <= 1e-12, Errc::non_unit_sample_point,
            "sample point off the unit circle");
  const Eigen::Index d = axis == Axis::Z1 ? plane.rows() : plane.cols();
  SpectralSliceSet out;
  out.axis = axis;
  out.points.assign(points.begin(), points.end());
  out.slices.reserve(points.size());
  CVec powers(d);
  for (const cplx& w : points) {
    const double theta = std::arg(w);
    for (Eigen::Index m = 0; m < d; ++m) powers(m) = std::polar(1.0, theta * double(m));
    CVec slice;
    if (axis == Axis::Z1)
      slice = (plane.transpose() * powers.real()).cast<cplx>() +
              cplx(0, 1) * (plane.transpose() * powers.imag()).cast<cplx>();
    else
      slice = (plane * powers.real()).cast<cplx>() +
              cplx(0, 1) * (plane * powers.imag()).cast<cplx>();
    out.slices.push_back(std::move(slice));
  }
  return out;
}

CMat bezout_leading_block(const CVec& p, const CVec& q, int size) {
  require(size >= 1, Errc::invalid_argument, "bezout block size must be >= 1");
  require(!all_zero(p) && !all_zero(q), Errc::degenerate_input,
          "bezout of an all-zero polynomial");
  CMat b(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      cplx s(0.0, 0.0);
      for (int k = 0; k <= std::min(i, j); ++k)
        s += coef(p, i + j + 1 - k) * coef(q, k) - coef(q, i + j + 1 - k) * coef(p, k);
      b(i, j) = s;
    }
  return b;
}

SingularityResult numerical_singularity(const CMat& m, double tau) {
  require(m.rows() == m.cols() && m.rows() >= 1, Errc::invalid_argument,
          "singularity test needs a square matrix");
  require(tau > 0.0 && tau < 1.0, Errc::invalid_argument, "tau must lie in (0,1)");
  Eigen::JacobiSVD<CMat> svd(m);
  const Vec& sv = svd.singularValues();
  double smax = sv(0);
  if (smax == 0.0) return {true, 0.0};
  double ratio = sv(sv.size() - 1) / smax;
  return {ratio < tau, ratio};
}

CofactorSolution cofactor_null_solve(const CVec& p, const CVec& q, int t, double gap_threshold) {
  require(t >= 1, Errc::invalid_argument, "cofactor width must be >= 1");
  require(p.size() >= t && q.size() >= t, Errc::invalid_argument,
          "slice degree below cofactor degree");
  const Eigen::Index rows = std::max(p.size(), q.size()) + t - 1;
  CMat a = CMat::Zero(rows, 2 * t);
  for (int j = 0; j < t; ++j) {
    a.col(j).segment(j, p.size()) = p;        // p * k2
    a.col(t + j).segment(j, q.size()) = -q;   // - q * k1
  }
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  double smax = sv(0);
  /* a wide system carries cols-rows implicit zero singular values */
  const Eigen::Index implicit = 2 * t - sv.size();
  double second_smallest =
      implicit == 0 ? sv(sv.size() - 2) : (implicit == 1 ? sv(sv.size() - 1) : 0.0);
  double gap = smax == 0.0 ? 0.0 : second_smallest / smax;
  if (gap < gap_threshold)
    fail(Errc::ill_conditioned,
         "cofactor null space not one-dimensional (gap " + std::to_string(gap) + ")");
  CVec x = svd.matrixV().col(2 * t - 1);
  normalize_phase(x);
  CofactorSolution sol;
  sol.k2 = x.head(t);
  sol.k1 = x.tail(t);
  sol.gap = gap;
  return sol;
}

CVec homogeneous_lsq(const CMat& a) {
  require(a.rows() >= a.cols() && a.cols() >= 1, Errc::invalid_argument,
          "homogeneous system needs rows >= cols");
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
  CVec x = svd.matrixV().col(a.cols() - 1);
  normalize_phase(x);
  return x;
}

CMat sylvester_matrix(const CVec& p, const CVec& q) {
  require(p.size() >= 1 && q.size() >= 1, Errc::invalid_argument, "empty polynomial");
  const Eigen::Index m = p.size() - 1, n = q.size() - 1;
  CMat s = CMat::Zero(m + n, m + n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index k = 0; k <= m; ++k) s(r, r + k) = p(m - k);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index k = 0; k <= n; ++k) s(n + r, r + k) = q(n - k);
  return s;
}

int numerical_degree(const CVec& p, double rel_tol) {
  if (p.size() == 0) return -1;
  double mx = p.cwiseAbs().maxCoeff();
  if (mx == 0.0) return -1;
  for (Eigen::Index i = p.size() - 1; i >= 0; --i)
    if (std::abs(p(i)) > rel_tol * mx) return int(i);
  return -1;
}

}  // namespace cbp
