#include "kobdyn/lempert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "kobdyn/errors.hpp"
#include "kobdyn/rng.hpp"

namespace kobdyn {

namespace {

// Planar section {lambda : z + lambda dir in D} as a round disk, exact when
// the domain gauge is a Hermitian quadratic (disk, ball, linear images).
struct SectionDisk {
  Complex center;
  double radius;
};

std::optional<SectionDisk> quadratic_section(const Domain& D, const Point& z, const Point& dir) {
  Point a, b;
  switch (D.kind()) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall:
      a = z; b = dir; break;
    case DomainKind::LinearImage:
      a = D.T_inv() * z; b = D.T_inv() * dir; break;
    default:
      return std::nullopt;
  }
  double nb2 = b.squaredNorm();
  Complex mu = hermitian(b, a);  // <b,a>
  Complex center = -std::conj(mu) / nb2;
  double r2 = (1.0 - a.squaredNorm() + std::norm(mu) / nb2) / nb2;
  if (r2 <= 0) return std::nullopt;
  return SectionDisk{center, std::sqrt(r2)};
}

// Least-squares circle through sampled support points of a general section,
// shrunk to the inscribed radius seen from the fitted center.
std::optional<SectionDisk> sampled_section(const Domain& D, const Point& z, const Point& dir) {
  auto inside = [&](Complex lam) { return D.rho(z + lam * dir) < 0; };
  if (!inside(Complex(0)) || !inside(Complex(1))) return std::nullopt;
  auto ray_extent = [&](Complex c, double theta) {
    Complex e{std::cos(theta), std::sin(theta)};
    double hi = 1e-3;
    while (inside(c + hi * e) && hi < 1e7) hi *= 2.0;
    double lo = hi * 0.5 < 1e-3 ? 0.0 : hi * 0.5;
    for (int i = 0; i < 80; ++i) {
      double mid = 0.5 * (lo + hi);
      if (inside(c + mid * e)) lo = mid; else hi = mid;
    }
    return lo;
  };
  const int S = 64;
  Complex c0{0.5, 0.0};
  std::vector<Complex> bd(S);
  for (int j = 0; j < S; ++j) {
    double th = 6.283185307179586 * j / S;
    bd[j] = c0 + ray_extent(c0, th) * Complex{std::cos(th), std::sin(th)};
  }
  // Kasa circle fit: |w|^2 = 2 Re(conj(c) w) + (r^2 - |c|^2)
  Eigen::MatrixXd A(S, 3);
  Eigen::VectorXd rhs(S);
  for (int j = 0; j < S; ++j) {
    A(j, 0) = 2.0 * bd[j].real();
    A(j, 1) = 2.0 * bd[j].imag();
    A(j, 2) = 1.0;
    rhs(j) = std::norm(bd[j]);
  }
  Eigen::Vector3d sol = A.colPivHouseholderQr().solve(rhs);
  Complex c{sol(0), sol(1)};
  double r2 = sol(2) + std::norm(c);
  if (r2 <= 0) return std::nullopt;
  // inscribed radius from the fitted center
  double r = 1e300;
  for (int j = 0; j < S; ++j) r = std::min(r, std::abs(bd[j] - c));
  for (int j = 0; j < S; ++j) {
    double th = 6.283185307179586 * (j + 0.5) / S;
    r = std::min(r, ray_extent(c, th));
  }
  if (!(r > 0) || std::abs(c) >= r || std::abs(1.0 - c) >= r) return std::nullopt;
  return SectionDisk{c, r};
}

// phi(zeta) = c_0 + c_1 zeta + ... + c_J zeta^J with phi(zeta0) = z and
// phi(eta) = w; c_0 and c_1 are eliminated through the two interpolation
// constraints, the value is k_Delta(zeta0, eta).
class DiskSearch {
 public:
  DiskSearch(const Domain& D, Point z, Point w, const LempertConfig& cfg)
      : D_(D), z_(std::move(z)), w_(std::move(w)), cfg_(cfg),
        J_(std::max(1, cfg.degree)), dim_(D.dim()) {
    dir_ = w_ - z_;
    const int S = cfg_.boundary_samples;
    circle_.resize(S);
    for (int t = 0; t < S; ++t) {
      double th = 6.283185307179586 * t / S;
      circle_[t] = {std::cos(th), std::sin(th)};
    }
    nfree_ = 3 + 2 * dim_ * (J_ - 1);
  }

  // x = (Re zeta0, Im zeta0, eta, Re/Im c_2..c_J)
  struct Assembled {
    std::vector<Point> c;  // c_0..c_J
    Complex zeta0;
    double eta;
    bool degenerate = false;
  };

  Assembled assemble(const std::vector<double>& x) const {
    Assembled a;
    a.zeta0 = {x[0], x[1]};
    double r0 = std::abs(a.zeta0);
    if (r0 > 1.0 - 1e-12) {
      a.zeta0 *= (1.0 - 1e-12) / r0;
    }
    a.eta = std::clamp(x[2], -(1.0 - 1e-12), 1.0 - 1e-12);
    a.c.assign(J_ + 1, Point::Zero(dim_));
    if (std::abs(a.eta - a.zeta0) < 1e-9) {
      a.degenerate = true;
      return a;
    }
    Point tail_eta = Point::Zero(dim_), tail_z0 = Point::Zero(dim_);
    Complex ep = a.eta * a.eta, zp = a.zeta0 * a.zeta0;
    for (int j = 2; j <= J_; ++j) {
      Point cj(dim_);
      for (int i = 0; i < dim_; ++i)
        cj[i] = {x[3 + 2 * dim_ * (j - 2) + 2 * i], x[3 + 2 * dim_ * (j - 2) + 2 * i + 1]};
      a.c[j] = cj;
      tail_eta += ep * cj;
      tail_z0 += zp * cj;
      ep *= a.eta;
      zp *= a.zeta0;
    }
    Complex det = Complex(a.eta) - a.zeta0;
    a.c[1] = (dir_ - tail_eta + tail_z0) / det;
    a.c[0] = z_ - a.zeta0 * a.c[1] - tail_z0;
    return a;
  }

  double max_rho(const Assembled& a) const {
    ++evals_;
    double worst = -1e300;
    for (const Complex& u : circle_) {
      Point p = a.c[J_];
      for (int j = J_ - 1; j >= 0; --j) p = u * p + a.c[j];
      worst = std::max(worst, D_.rho(p));
    }
    return worst;
  }

  double value(const Assembled& a) const {
    double m = std::abs(Complex(a.eta) - a.zeta0) /
               std::abs(Complex(1.0) - std::conj(a.zeta0) * Complex(a.eta));
    m = std::min(m, 1.0 - 1e-16);
    return std::atanh(m);
  }

  double objective(const std::vector<double>& x) const {
    Assembled a = assemble(x);
    if (a.degenerate) return 1e6;
    double v = max_rho(a);
    double F = value(a);
    if (v > -cfg_.margin) F += 50.0 * (v + cfg_.margin) + 1.0;
    return F;
  }

  bool feasible(const std::vector<double>& x) const {
    Assembled a = assemble(x);
    return !a.degenerate && max_rho(a) <= -cfg_.margin;
  }

  int evals() const { return evals_; }
  int free_dims() const { return nfree_; }
  int degree() const { return J_; }
  const Point& dir() const { return dir_; }

  // Affine seed from a section disk: the largest feasible homothety of the
  // extremal line-section disk; exact for quadratic sections up to margin.
  std::optional<std::vector<double>> seed_from_section(const SectionDisk& s) const {
    Complex one_minus = Complex(1.0) - s.center;
    double s_min = std::max(std::abs(s.center), std::abs(one_minus)) / s.radius;
    if (s_min >= 1.0) return std::nullopt;
    s_min = std::min(1.0 - 1e-12, s_min * (1.0 + 1e-12) + 1e-15);
    Complex rot = one_minus / std::abs(one_minus);
    auto pack = [&](double sc) {
      std::vector<double> x(nfree_, 0.0);
      Complex zeta0 = -s.center * std::conj(rot) / (sc * s.radius);
      double eta = std::abs(one_minus) / (sc * s.radius);
      x[0] = zeta0.real();
      x[1] = zeta0.imag();
      x[2] = eta;
      return x;
    };
    if (feasible(pack(1.0))) return pack(1.0);
    double lo = s_min, hi = 1.0;
    if (!feasible(pack(lo))) return std::nullopt;
    for (int i = 0; i < 70 && hi - lo > 1e-14; ++i) {
      double mid = 0.5 * (lo + hi);
      if (feasible(pack(mid))) lo = mid; else hi = mid;
    }
    return pack(lo);
  }

 private:
  const Domain& D_;
  Point z_, w_, dir_;
  LempertConfig cfg_;
  int J_, dim_, nfree_ = 0;
  std::vector<Complex> circle_;
  mutable int evals_ = 0;
};

}  // namespace

LempertResult lempert_numeric(const Domain& D, const Point& z, const Point& w,
                              const LempertConfig& cfg) {
  if (z.size() != D.dim() || w.size() != D.dim())
    throw DomainError("lempert_numeric: dimension mismatch");
  if (!D.contains(z) || !D.contains(w))
    throw DomainError("lempert_numeric: endpoints must be interior");
  if ((z - w).norm() < 1e-300) throw DomainError("lempert_numeric: coincident endpoints");

  DiskSearch search(D, z, w, cfg);
  const int J = search.degree();

  auto section = quadratic_section(D, z, w - z);
  bool exact_section = section.has_value();
  if (!section) section = sampled_section(D, z, w - z);

  LempertResult out;
  out.degree = J;

  std::optional<std::vector<double>> seed;
  if (section) seed = search.seed_from_section(*section);

  if (!seed) {
    // No feasible disk found: report the raw line-section estimate, flagged.
    out.fallback = true;
    if (section) {
      Complex a0 = -section->center / section->radius;
      Complex m = (Complex(1.0) - section->center) / section->radius;
      double pm = std::abs((m - a0) / (Complex(1.0) - std::conj(a0) * m));
      out.eta = std::min(pm, 1.0 - 1e-12);
    } else {
      out.eta = 1.0 - 1e-12;
    }
    out.value = std::atanh(out.eta);
    out.feasibility_gap = 1.0;
    return out;
  }

  std::vector<double> best = *seed;
  double best_val = search.value(search.assemble(best));

  // Derivative-free refinement (useful mostly off the quadratic sections).
  const bool needs_search = !exact_section && cfg.max_evals > 0;
  if (needs_search) {
    SplitRng rng(cfg.seed);
    std::vector<double> x = best;
    double fx = search.objective(x);
    std::vector<double> step(search.free_dims(), 0.0);
    step[0] = step[1] = 0.02;
    step[2] = 0.02 * (1.0 - std::abs(x[2]));
    double cscale = 0.05;
    for (std::size_t i = 3; i < x.size(); ++i) step[i] = cscale;
    std::vector<int> order(search.free_dims());
    std::iota(order.begin(), order.end(), 0);
    while (search.evals() < cfg.max_evals) {
      bool improved = false;
      for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_u64() % (i + 1)]);
      for (int idx : order) {
        for (double sgn : {+1.0, -1.0}) {
          auto y = x;
          y[idx] += sgn * step[idx];
          double fy = search.objective(y);
          if (fy < fx - 1e-15) {
            x = std::move(y);
            fx = fy;
            improved = true;
            break;
          }
          if (search.evals() >= cfg.max_evals) break;
        }
        if (search.evals() >= cfg.max_evals) break;
      }
      if (improved) {
        if (search.feasible(x)) {
          double vx = search.value(search.assemble(x));
          if (vx < best_val) {
            best = x;
            best_val = vx;
          }
        }
      } else {
        bool all_small = true;
        for (auto& s : step) {
          s *= 0.5;
          if (s > 1e-10) all_small = false;
        }
        if (all_small) break;
      }
    }
  }

  DiskSearch::Assembled a = search.assemble(best);
  out.eta = a.eta;
  out.value = search.value(a);
  out.feasibility_gap = std::max(0.0, search.max_rho(a));
  out.coeffs.assign(a.c.begin(), a.c.end());
  return out;
}

}  // namespace kobdyn
