#pragma once

#include "cbp/types.hpp"

namespace cbp {

/* Unnormalized forward 2D DFT, any size >= 1x1 (non-power-of-two included):
   F[u][v] = sum_{m,n} x[m][n] exp(-2*pi*i*(u*m/M + v*n/N)). */
CMat fft2(const CMat& x);
CMat fft2(const Mat& x);

/* Inverse of fft2 (positive exponent, 1/(M*N) normalization). */
CMat ifft2(const CMat& x);

/* All t slices of `plane` at the t-th roots of unity w_i = exp(-2*pi*i*i/t)
   along `axis`, computed by folding (exact reassociation of the direct sums).
   Axis::Z1: returns t x N, row i = slice at w_i. Axis::Z2: M x t, column i. */
CMat axis_roots_dft(const Mat& plane, Axis axis, int t);

}  // namespace cbp
