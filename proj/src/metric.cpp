#include "kobdyn/metric.hpp"

#include <cmath>

#include "kobdyn/errors.hpp"

namespace kobdyn {

double poincare_dist(Complex z, Complex w) {
  if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
    throw DomainError("poincare_dist: argument not in the open unit disk");
  if (z == w) return 0.0;
  double m = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
  if (m >= 1.0) throw DomainError("poincare_dist: pseudo-distance overflow");
  return std::atanh(m);
}

double ball_dist(const Point& z, const Point& w) {
  if (z.size() != w.size()) throw DomainError("ball_dist: dimension mismatch");
  double nz = z.squaredNorm(), nw = w.squaredNorm();
  if (nz >= 1.0 || nw >= 1.0) throw DomainError("ball_dist: point not in the open unit ball");
  if (z == w) return 0.0;
  double denom = std::norm(Complex(1.0) - hermitian(z, w));
  double s = (1.0 - nz) * (1.0 - nw) / denom;
  if (s > 1.0) s = 1.0;
  double m = std::sqrt(1.0 - s);
  if (m >= 1.0) throw DomainError("ball_dist: pseudo-distance overflow");
  return std::atanh(m);
}

double distance(const Domain& D, const Point& z, const Point& w) {
  LempertConfig cfg;
  return distance(D, z, w, cfg);
}

double distance(const Domain& D, const Point& z, const Point& w, const LempertConfig& cfg) {
  if (z.size() != D.dim() || w.size() != D.dim())
    throw DomainError("distance: dimension mismatch");
  if (!D.contains(z) || !D.contains(w)) throw DomainError("distance: point outside the domain");
  if (z == w) return 0.0;
  switch (D.kind()) {
    case DomainKind::UnitDisk:
      return poincare_dist(z[0], w[0]);
    case DomainKind::UnitBall:
      return ball_dist(z, w);
    case DomainKind::LinearImage:
      return ball_dist(D.T_inv() * z, D.T_inv() * w);
    case DomainKind::General:
      return lempert_numeric(D, z, w, cfg).value;
  }
  throw DomainError("distance: unknown domain kind");
}

}  // namespace kobdyn
