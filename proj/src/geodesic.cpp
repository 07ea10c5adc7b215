#include "kobdyn/geodesic.hpp"

#include <cmath>

#include "kobdyn/errors.hpp"
#include "kobdyn/metric.hpp"

namespace kobdyn {

Point ball_mobius(const Point& a, const Point& z) {
  double na2 = a.squaredNorm();
  if (na2 >= 1.0) throw DomainError("ball_mobius: center not in the open ball");
  if (na2 < 1e-300) return -z;
  Complex ip = hermitian(z, a);           // <z,a>
  Point pz = (ip / na2) * a;              // projection onto span(a)
  Point qz = z - pz;
  double s = std::sqrt(1.0 - na2);
  Complex denom = Complex(1.0) - ip;
  return (a - pz - s * qz) / denom;
}

namespace {

Geodesic ball_geodesic(const Domain& D, const Point& z, const Point& dir_unit, double r) {
  // phi(zeta) = psi(zeta v) with psi the involution swapping z and 0.
  Point base = z;
  Point v = dir_unit;
  Geodesic g;
  g.basepoint = z;
  g.target_param = r;
  g.eval = [base, v](Complex zeta) { return ball_mobius(base, zeta * v); };
  g.left_inverse = [base, v](const Point& x) { return hermitian(ball_mobius(base, x), v); };
  (void)D;
  return g;
}

Geodesic pullback_geodesic(const Domain& D, const Geodesic& inner) {
  CMat T = D.T();
  CMat Ti = D.T_inv();
  Geodesic g;
  g.basepoint = T * inner.basepoint;
  g.target_param = inner.target_param;
  auto ev = inner.eval;
  auto li = inner.left_inverse;
  g.eval = [T, ev](Complex zeta) { return Point(T * ev(zeta)); };
  g.left_inverse = [Ti, li](const Point& x) { return li(Ti * x); };
  return g;
}

}  // namespace

Geodesic geodesic_through(const Domain& D, const Point& z, const Point& w) {
  switch (D.kind()) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall: {
      if (!D.contains(z) || !D.contains(w)) throw DomainError("geodesic_through: point outside domain");
      if ((z - w).norm() < 1e-300) throw DomainError("geodesic_through: coincident endpoints");
      Point u = ball_mobius(z, w);
      double r = u.norm();
      return ball_geodesic(D, z, u / r, r);
    }
    case DomainKind::LinearImage: {
      Domain B = Domain::ball(D.dim());
      return pullback_geodesic(D, geodesic_through(B, Point(D.T_inv() * z), Point(D.T_inv() * w)));
    }
    case DomainKind::General:
      throw UnsupportedOperation("geodesic_through: no numerical geodesics on general domains");
  }
  throw UnsupportedOperation("geodesic_through: unknown domain kind");
}

Geodesic geodesic_through(const Domain& D, const Point& z, const BoundaryPoint& tau) {
  switch (D.kind()) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall: {
      if (!D.contains(z)) throw DomainError("geodesic_through: basepoint outside domain");
      Point u = ball_mobius(z, tau.coords);
      double n = u.norm();
      if (n < 1e-300) throw DomainError("geodesic_through: degenerate boundary target");
      return ball_geodesic(D, z, u / n, 1.0);
    }
    case DomainKind::LinearImage: {
      Domain B = Domain::ball(D.dim());
      BoundaryPoint tb{Point(D.T_inv() * tau.coords)};
      tb.coords /= tb.coords.norm();
      return pullback_geodesic(D, geodesic_through(B, Point(D.T_inv() * z), tb));
    }
    case DomainKind::General:
      throw UnsupportedOperation("geodesic_through: no numerical geodesics on general domains");
  }
  throw UnsupportedOperation("geodesic_through: unknown domain kind");
}

}  // namespace kobdyn
