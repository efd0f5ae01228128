#pragma once

#include <span>
#include <vector>

#include "cbp/error.hpp"
#include "cbp/types.hpp"

namespace cbp {

/* Full 2D convolution: out[i][j] = sum_{m,n} a[m][n] * b[i-m][j-n], size
   (Ma+Mb-1) x (Na+Nb-1). Coefficient array of the product of the two
   bivariate polynomials the inputs represent. */
Mat conv2_full(const Mat& a, const Mat& b);

/* 1D restrictions of an image polynomial at unit-circle sample points.
   Axis::Z1 fixes z1 = w: slice_i[n] = sum_m plane[m][n] * w_i^m (one slice per
   point, a polynomial in z2). Axis::Z2 symmetrically yields polynomials in z1. */
struct SpectralSliceSet {
  Axis axis = Axis::Z1;
  std::vector<cplx> points;
  std::vector<CVec> slices;
};

SpectralSliceSet axis_dft(const Mat& plane, Axis axis, std::span<const cplx> points);

/* Leading size x size principal block of the Bezout matrix of p and q:
   B[i][j] = sum_{k=0}^{min(i,j)} p[i+j+1-k]*q[k] - q[i+j+1-k]*p[k],
   out-of-range coefficients read as zero. */
CMat bezout_leading_block(const CVec& p, const CVec& q, int size);

struct SingularityResult {
  bool singular = true;
  double ratio = 0.0;  // sigma_min / sigma_max, 0 for the zero matrix
};

/* Relative singularity test: singular iff sigma_min/sigma_max < tau. */
SingularityResult numerical_singularity(const CMat& m, double tau);

inline constexpr double kDefaultGapThreshold = 1e-9;

struct CofactorSolution {
  CVec k1, k2;  // degree t-1 cofactor estimates, unknown common scale
  double gap = 0.0;  // second-smallest sigma / largest sigma of the system
};

/* Null-space solve of p*k2 - q*k1 = 0 over the 2t unknown cofactor
   coefficients, stacked convolution matrices, smallest right singular vector.
   Phase normalized so the largest-magnitude entry is real positive. */
CofactorSolution cofactor_null_solve(const CVec& p, const CVec& q, int t,
                                     double gap_threshold = kDefaultGapThreshold);

/* Unit-norm x minimizing |A x|_2 (right singular vector of the smallest
   singular value), same phase normalization as above. Requires rows >= cols. */
CVec homogeneous_lsq(const CMat& a);

/* Sylvester matrix of p (degree m) and q (degree n), (m+n) x (m+n); degrees
   are the nominal vector lengths minus one, so trim first if that matters. */
CMat sylvester_matrix(const CVec& p, const CVec& q);

/* Index of the last coefficient with |c| > rel_tol * max|c|; -1 for zero input. */
int numerical_degree(const CVec& p, double rel_tol = 1e-12);

}  // namespace cbp
