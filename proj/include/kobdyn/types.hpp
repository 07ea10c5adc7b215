#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace kobdyn {

using Complex = std::complex<double>;
using Point = Eigen::VectorXcd;   // z in C^d
using CMat = Eigen::MatrixXcd;

// <z,w> = sum z_i conj(w_i)  (linear in the first slot)
inline Complex hermitian(const Point& z, const Point& w) { return w.dot(z); }

inline bool is_finite(const Point& z) {
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag())) return false;
  return true;
}

inline Point point1(Complex z) {
  Point p(1);
  p[0] = z;
  return p;
}

inline Point point2(Complex a, Complex b) {
  Point p(2);
  p[0] = a;
  p[1] = b;
  return p;
}

// A point of the topological boundary of a domain.  Construct through
// Domain::boundary_point so the membership invariant is enforced.
struct BoundaryPoint {
  Point coords;
};

}  // namespace kobdyn
