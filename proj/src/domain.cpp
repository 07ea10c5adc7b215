#include "kobdyn/domain.hpp"

#include <cmath>

#include "kobdyn/errors.hpp"
#include "kobdyn/rng.hpp"

namespace kobdyn {

struct Domain::Impl {
  CMat T, T_inv;
  CMat M;  // T_inv^H T_inv, gauge matrix of a linear image
  Eigen::MatrixXd A;            // real 2d x 2d form of M
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  GeneralSpec general;
};

Domain Domain::disk() {
  Domain d;
  d.kind_ = DomainKind::UnitDisk;
  d.dim_ = 1;
  return d;
}

Domain Domain::ball(int dim) {
  if (dim < 1) throw ConfigError("ball dimension must be positive");
  Domain d;
  d.kind_ = dim == 1 ? DomainKind::UnitDisk : DomainKind::UnitBall;
  d.dim_ = dim;
  return d;
}

namespace {

Eigen::VectorXd realify(const Point& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x[i] = z[i].real();
    x[z.size() + i] = z[i].imag();
  }
  return x;
}

Point complexify(const Eigen::VectorXd& x) {
  Eigen::Index d = x.size() / 2;
  Point z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = {x[i], x[d + i]};
  return z;
}

}  // namespace

Domain Domain::linear_image(const CMat& T) {
  if (T.rows() != T.cols() || T.rows() < 1) throw ConfigError("linear_image matrix must be square");
  Eigen::FullPivLU<CMat> lu(T);
  if (!lu.isInvertible()) throw ConfigError("linear_image matrix must be invertible");
  Domain d;
  d.kind_ = DomainKind::LinearImage;
  d.dim_ = static_cast<int>(T.rows());
  auto impl = std::make_shared<Impl>();
  impl->T = T;
  impl->T_inv = lu.inverse();
  impl->M = impl->T_inv.adjoint() * impl->T_inv;
  // Real embedding of the Hermitian gauge form: q(z) = x^T A x.
  const Eigen::Index n = T.rows();
  Eigen::MatrixXd A(2 * n, 2 * n);
  Eigen::MatrixXd MR = impl->M.real(), MI = impl->M.imag();
  A.topLeftCorner(n, n) = MR;
  A.topRightCorner(n, n) = -MI;
  A.bottomLeftCorner(n, n) = MI;
  A.bottomRightCorner(n, n) = MR;
  impl->A = A;
  impl->eig.compute(A);
  d.impl_ = std::move(impl);
  return d;
}

Domain Domain::general(GeneralSpec spec) {
  if (!spec.rho || !spec.grad) throw ConfigError("general domain needs rho and grad oracles");
  if (spec.interior_point.size() != spec.dim)
    throw ConfigError("general domain interior_point has wrong dimension");
  if (spec.rho(spec.interior_point) >= 0)
    throw ConfigError("general domain interior_point is not interior");
  Domain d;
  d.kind_ = DomainKind::General;
  d.dim_ = spec.dim;
  auto impl = std::make_shared<Impl>();
  impl->general = std::move(spec);
  d.impl_ = std::move(impl);
  return d;
}

double Domain::rho(const Point& z) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall:
      return z.squaredNorm() - 1.0;
    case DomainKind::LinearImage:
      return (impl_->T_inv * z).squaredNorm() - 1.0;
    case DomainKind::General:
      return impl_->general.rho(z);
  }
  return 0;
}

Point Domain::rho_grad(const Point& z) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall:
      return z;
    case DomainKind::LinearImage:
      return impl_->M * z;
    case DomainKind::General:
      return impl_->general.grad(z);
  }
  return z;
}

bool Domain::contains(const Point& z, double margin) const {
  if (z.size() != dim_) return false;
  if (!is_finite(z)) return false;
  return rho(z) < -margin;
}

double Domain::boundary_dist(const Point& z) const {
  if (z.size() != dim_) throw DomainError("dimension mismatch in boundary_dist");
  switch (kind_) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall:
      return std::max(0.0, 1.0 - z.norm());
    case DomainKind::LinearImage:
    case DomainKind::General:
      return (z - project_boundary(z)).norm();
  }
  return 0;
}

Point Domain::project_boundary(const Point& z) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall: {
      double n = z.norm();
      if (n < 1e-300) {
        Point e = Point::Zero(dim_);
        e[0] = 1.0;
        return e;
      }
      return z / n;
    }
    case DomainKind::LinearImage: {
      // Nearest point on the ellipsoid x^T A x = 1: x = (I + mu A)^-1 y with
      // q(mu) = 1 solved on (-1/lmax, +inf); q is monotone decreasing there.
      const auto& eig = impl_->eig;
      Eigen::VectorXd lam = eig.eigenvalues();
      Eigen::VectorXd y = eig.eigenvectors().transpose() * realify(z);
      double lmax = lam.maxCoeff();
      if (y.norm() < 1e-300) {
        // center: nearest boundary point along the stiffest axis
        Eigen::VectorXd x = Eigen::VectorXd::Zero(y.size());
        for (int i = 0; i < lam.size(); ++i)
          if (lam[i] == lmax) { x[i] = 1.0 / std::sqrt(lmax); break; }
        return complexify(eig.eigenvectors() * x);
      }
      auto qval = [&](double mu) {
        double s = 0;
        for (int i = 0; i < lam.size(); ++i) {
          double t = y[i] / (1.0 + mu * lam[i]);
          s += lam[i] * t * t;
        }
        return s;
      };
      double lo = -1.0 / lmax, hi = 0.0;
      if (qval(0.0) > 1.0) {  // exterior or on-boundary input: root at mu >= 0
        hi = 1.0 / lmax;
        while (qval(hi) > 1.0) hi *= 2.0;
        lo = 0.0;
      } else {
        // interior: bracket toward the pole
        double step = 0.5 * (0.0 - lo);
        lo = 0.0 - step;
        while (qval(lo) < 1.0) {
          step *= 0.5;
          lo = -1.0 / lmax + step;
          if (step < 1e-18 / lmax) break;
        }
        hi = 0.0;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-17 * (1.0 + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (qval(mid) > 1.0) lo = mid; else hi = mid;
      }
      double mu = 0.5 * (lo + hi);
      Eigen::VectorXd x(y.size());
      for (int i = 0; i < lam.size(); ++i) x[i] = y[i] / (1.0 + mu * lam[i]);
      return complexify(impl_->eig.eigenvectors() * x);
    }
    case DomainKind::General: {
      const auto& g = impl_->general;
      if (g.rho(z) >= 0) {
        // exterior or boundary input: single crossing on the segment toward
        // the interior point (convexity)
        Point q = g.interior_point;
        double lo = 0.0, hi = 1.0;  // rho(z + t (q - z)): >= 0 at 0, < 0 at 1
        for (int b = 0; b < 200 && hi - lo > 1e-16; ++b) {
          double mid = 0.5 * (lo + hi);
          if (g.rho(z + mid * (q - z)) >= 0) lo = mid; else hi = mid;
        }
        return z + 0.5 * (lo + hi) * (q - z);
      }
      // Interior input: shoot outward along the gradient, land on rho = 0,
      // re-aim with the boundary normal until the foot stops moving.  A ray
      // from an interior point of a convex domain crosses the boundary once.
      Point dir = g.grad(z);
      if (dir.norm() < 1e-14) dir = Point::Ones(dim_);
      dir /= dir.norm();
      Point foot;
      for (int it = 0; it < 200; ++it) {
        double t_lo = 0.0, t_hi = 1e-3;
        while (g.rho(z + t_hi * dir) < 0 && t_hi < 1e6) t_hi *= 2.0;
        if (t_hi >= 1e6) throw DomainError("unbounded ray in project_boundary");
        for (int b = 0; b < 200 && t_hi - t_lo > 1e-15 * (1 + t_hi); ++b) {
          double mid = 0.5 * (t_lo + t_hi);
          if (g.rho(z + mid * dir) < 0) t_lo = mid; else t_hi = mid;
        }
        Point nf = z + 0.5 * (t_lo + t_hi) * dir;
        if (it > 0 && (nf - foot).norm() < 1e-11) { foot = nf; break; }
        foot = nf;
        Point n = g.grad(foot);
        double nn = n.norm();
        if (nn < 1e-14) break;
        dir = n / nn;
      }
      return foot;
    }
  }
  return z;
}

Point Domain::inward_normal(const Point& boundary_pt) const {
  Point g = rho_grad(boundary_pt);
  double n = g.norm();
  if (n < 1e-14) throw DomainError("degenerate gradient at boundary point");
  return -g / n;
}

Point Domain::center() const {
  if (kind_ == DomainKind::General) return impl_->general.interior_point;
  return Point::Zero(dim_);
}

BoundaryPoint Domain::boundary_point(const Point& p) const {
  if (p.size() != dim_) throw DomainError("dimension mismatch in boundary_point");
  Point q = project_boundary(p);
  if ((q - p).norm() > 1e-6)
    throw DomainError("point is not on the boundary (distance " +
                      std::to_string((q - p).norm()) + ")");
  return BoundaryPoint{q};
}

const CMat& Domain::T() const {
  if (kind_ != DomainKind::LinearImage) throw UnsupportedOperation("T() needs a linear image domain");
  return impl_->T;
}

const CMat& Domain::T_inv() const {
  if (kind_ != DomainKind::LinearImage) throw UnsupportedOperation("T_inv() needs a linear image domain");
  return impl_->T_inv;
}

const GeneralSpec& Domain::general_spec() const {
  if (kind_ != DomainKind::General) throw UnsupportedOperation("general_spec() needs a general domain");
  return impl_->general;
}

double sampled_convexity_margin(const Domain& d, int samples, std::uint64_t seed) {
  // Second difference of rho along chords between boundary points; convexity
  // of the sublevel set forces midpoints strictly inside.
  SplitRng rng(seed);
  double worst = 1e300;
  Point c = d.center();
  auto boundary_hit = [&](const Point& u) {
    double lo = 0.0, hi = 1e-3;
    while (d.rho(c + hi * u) < 0 && hi < 1e6) hi *= 2.0;
    for (int b = 0; b < 100; ++b) {
      double mid = 0.5 * (lo + hi);
      if (d.rho(c + mid * u) < 0) lo = mid; else hi = mid;
    }
    return Point(c + lo * u);
  };
  for (int i = 0; i < samples; ++i) {
    Point a = boundary_hit(rng.direction(d.dim()));
    Point b = boundary_hit(rng.direction(d.dim()));
    double chord = (a - b).norm();
    if (chord < 1e-8) continue;
    double mid = -d.rho(0.5 * (a + b)) / (chord * chord);
    worst = std::min(worst, mid);
  }
  return worst;
}

}  // namespace kobdyn
