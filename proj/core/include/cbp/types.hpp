#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace cbp {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

/* Image planes are coefficient arrays of bivariate polynomials: row index m is
   the z1 power, column index n the z2 power. */
using ImagePlane = Mat;

enum class Axis { Z1, Z2 };

inline const char* axis_name(Axis a) { return a == Axis::Z1 ? "z1" : "z2"; }

}  // namespace cbp
