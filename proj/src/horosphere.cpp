#include "kobdyn/horosphere.hpp"

#include <cmath>
#include <vector>

#include "kobdyn/errors.hpp"
#include "kobdyn/metric.hpp"
#include "kobdyn/numerics.hpp"

namespace kobdyn {

namespace {

double ball_horofunction0(const Point& tau, const Point& z) {
  double denom = 1.0 - z.squaredNorm();
  if (denom <= 0.0) throw DomainError("horofunction: point not strictly inside");
  return std::norm(Complex(1.0) - hermitian(z, tau)) / denom;
}

}  // namespace

double horofunction(const Domain& D, const BoundaryPoint& tau, const Point& pole, const Point& z) {
  if (!D.contains(pole) || !D.contains(z))
    throw DomainError("horofunction: pole and argument must be interior");
  if ((tau.coords - pole).norm() < 1e-12)
    throw DomainError("horofunction: center degenerates onto the pole");
  switch (D.kind()) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall:
      return ball_horofunction0(tau.coords, z) / ball_horofunction0(tau.coords, pole);
    case DomainKind::LinearImage: {
      Point tb = D.T_inv() * tau.coords;
      tb /= tb.norm();
      return ball_horofunction0(tb, D.T_inv() * z) / ball_horofunction0(tb, D.T_inv() * pole);
    }
    case DomainKind::General: {
      auto est = horofunction_limit_estimate(D, tau, pole, z);
      return est.value;
    }
  }
  throw DomainError("horofunction: unknown domain kind");
}

HorofunctionEstimate horofunction_limit_estimate(const Domain& D, const BoundaryPoint& tau,
                                                 const Point& pole, const Point& z,
                                                 int k_max, double tol) {
  if ((tau.coords - pole).norm() < 1e-12)
    throw DomainError("horofunction: center degenerates onto the pole");
  std::vector<double> g;
  Point seg = tau.coords - pole;
  for (int k = 2; k <= k_max; ++k) {
    Point w = tau.coords - std::ldexp(1.0, -k) * seg;
    if (!D.contains(w)) break;
    g.push_back(distance(D, z, w) - distance(D, pole, w));
  }
  if (g.size() < 3) throw EstimationError("horofunction: too few usable samples", 0.0, 1.0);
  Extrapolation ex = richardson(g, 0.5);
  HorofunctionEstimate out;
  out.samples = static_cast<int>(g.size());
  out.value = std::exp(2.0 * ex.value);
  out.error = out.value * 2.0 * ex.error;
  if (!ex.converged && ex.error > tol)
    throw EstimationError("horofunction: extrapolation did not settle", out.value, out.error);
  return out;
}

double kregion_gauge(const Domain& D, const BoundaryPoint& tau, const Point& pole, const Point& z) {
  return 0.5 * std::log(horofunction(D, tau, pole, z)) + distance(D, pole, z);
}

}  // namespace kobdyn
