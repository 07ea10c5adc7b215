#pragma once

#include <functional>

#include "kobdyn/domain.hpp"
#include "kobdyn/types.hpp"

namespace kobdyn {

// Complex geodesic phi: disk -> D with a holomorphic left inverse.
// eval accepts closed-disk parameters so boundary endpoints are reachable.
struct Geodesic {
  Point basepoint;                               // phi(0)
  double target_param = 0;                       // r with phi(r) = target (1 for boundary targets)
  std::function<Point(Complex)> eval;
  std::function<Complex(const Point&)> left_inverse;

  Point retraction(const Point& z) const { return eval(left_inverse(z)); }
};

// Involutive ball automorphism exchanging a and 0 (extends to the closed ball).
Point ball_mobius(const Point& a, const Point& z);

// Geodesic with phi(0) = z, phi(r) = w where r = tanh k_D(z, w).
Geodesic geodesic_through(const Domain& D, const Point& z, const Point& w);

// Geodesic ray with phi(0) = z, phi(1) = tau.
Geodesic geodesic_through(const Domain& D, const Point& z, const BoundaryPoint& tau);

}  // namespace kobdyn
