#pragma once

#include "cbp/types.hpp"

/* Real-input transform paths shared by the decoder; half spectra exploit
   conjugate symmetry. All are FFTW-backed, see fft.cpp. */
namespace cbp::detail {

/* Forward DFT along one axis of a real plane at all d-th roots of unity,
   d = extent along the axis, redundant conjugate half dropped.
   Axis::Z1: (M/2+1) x N, row i = slice at exp(-2pi*i*i/M).
   Axis::Z2: M x (N/2+1), column j = slice at exp(-2pi*i*j/N). */
CMat axis_spectrum_half(const Mat& plane, Axis axis);

/* Unnormalized forward 2D DFT of a real array, rows folded: (M/2+1) x N. */
CMat fft2_real_half(const Mat& x, int* full_rows);

/* Inverse of fft2_real_half: takes the half spectrum plus the true row count,
   returns the real M x N array (1/(M*N) applied). */
Mat ifft2_real_half(const CMat& half, int full_rows);

/* Smallest grid extent >= n whose prime factors are all in {2,3,5,7}; FFTW
   degrades badly on large prime factors. */
int friendly_size(int n);

}  // namespace cbp::detail
