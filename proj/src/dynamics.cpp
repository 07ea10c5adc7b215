#include "kobdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "kobdyn/errors.hpp"
#include "kobdyn/geodesic.hpp"
#include "kobdyn/horosphere.hpp"
#include "kobdyn/metric.hpp"
#include "kobdyn/numerics.hpp"
#include "kobdyn/rng.hpp"

namespace kobdyn {

using nlohmann::json;

namespace {

constexpr double kDistanceCap = 20.0;  // overflow guard near the boundary

double guarded_distance(const Domain& D, const Point& a, const Point& b, bool* capped) {
  try {
    return distance(D, a, b);
  } catch (const DomainError&) {
    if (capped) *capped = true;
    return kDistanceCap;
  }
}

json point_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back({p[i].real(), p[i].imag()});
  return a;
}

}  // namespace

json DilationEstimate::to_json() const {
  json s = json::array();
  for (auto& [t, b] : samples) s.push_back({t, b});
  return {{"value", infinite ? json("inf") : json(value)},
          {"infinite", infinite},
          {"error_bar", error_bar},
          {"pole", point_json(pole)},
          {"samples", s}};
}

json Classification::to_json() const {
  json j{{"kind", to_string(kind)}, {"spectral_radius", spectral_radius}};
  if (fixed_point) j["fixed_point"] = point_json(*fixed_point);
  if (wolff) j["wolff_point"] = point_json(wolff->coords);
  if (beta) j["beta_tau"] = beta->to_json();
  if (!evidence.is_null()) j["evidence"] = evidence;
  return j;
}

std::string to_string(MapClass k) {
  switch (k) {
    case MapClass::StronglyElliptic: return "strongly_elliptic";
    case MapClass::EllipticNonStrong: return "elliptic_non_strong";
    case MapClass::Hyperbolic: return "hyperbolic";
    case MapClass::Parabolic: return "parabolic";
  }
  return "?";
}

json ContractionEstimate::to_json() const {
  return {{"c", c}, {"sup", sup}, {"contradiction", contradiction}, {"witness", point_json(witness)}};
}

OrbitRecord iterate_forward(const HolMap& f, const Point& z0, int n) {
  if (!f.domain().contains(z0)) throw DomainError("iterate_forward: start outside the domain");
  OrbitRecord orb;
  orb.direction = OrbitDirection::Forward;
  orb.points.reserve(n + 1);
  orb.points.push_back(z0);
  Point z = z0;
  for (int i = 0; i < n; ++i) {
    Point w = f.eval(z);
    orb.steps.push_back(guarded_distance(f.domain(), w, z, &orb.distance_capped));
    orb.residuals.push_back(0.0);
    orb.points.push_back(w);
    z = std::move(w);
  }
  for (double s : orb.steps) orb.step_sup = std::max(orb.step_sup, s);
  return orb;
}

DilationEstimate dilation_coefficient(const HolMap& f, const BoundaryPoint& sigma,
                                      const Point& pole, const DilationConfig& cfg) {
  const Domain& D = f.domain();
  Geodesic phi = geodesic_through(D, pole, sigma);
  DilationEstimate est;
  est.pole = pole;
  std::vector<double> brackets;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    double t = 1.0 - std::ldexp(1.0, -k);
    Point zt = phi.eval(t);
    if (!D.contains(zt)) break;
    double b;
    try {
      b = distance(D, pole, zt) - distance(D, pole, f.eval(zt));
    } catch (const DomainError&) {
      break;  // truncated sample set near the boundary
    }
    est.samples.emplace_back(t, b);
    brackets.push_back(b);
  }
  if (brackets.size() < 4)
    throw EstimationError("dilation_coefficient: too few radial samples", 1.0, 1.0);

  // Divergence of the bracket means sigma is not fixed: beta = +infinity.
  {
    std::size_t n = brackets.size();
    double d1 = brackets[n - 1] - brackets[n - 2];
    double d2 = brackets[n - 2] - brackets[n - 3];
    double d3 = brackets[n - 3] - brackets[n - 4];
    bool steady = std::abs(d1) > 0.01 && std::abs(d1) > 0.6 * std::abs(d2) &&
                  std::abs(d2) > 0.6 * std::abs(d3);
    if (steady && d1 > 0) {
      est.infinite = true;
      est.value = std::numeric_limits<double>::infinity();
      est.error_bar = std::numeric_limits<double>::infinity();
      return est;
    }
    if (steady && d1 < 0)
      throw EstimationError("dilation_coefficient: bracket decreasing without bound", 0.0, 1.0);
  }

  Extrapolation ex = richardson(brackets, 0.5);
  if (!ex.converged)
    throw EstimationError("dilation_coefficient: radial bracket oscillates",
                          std::exp(2.0 * ex.value), ex.error);
  est.value = std::exp(2.0 * ex.value);
  est.error_bar = est.value * 2.0 * ex.error;
  return est;
}

BoundaryPoint polish_boundary_fixed_point(const HolMap& f, const BoundaryPoint& guess) {
  if (f.dim() != 1 || !f.boundary_evaluable()) return guess;
  double th = std::arg(guess.coords[0]);
  auto gap = [&](double t) {
    Complex e{std::cos(t), std::sin(t)};
    Complex w = f.node().eval(point1(e))[0];
    return std::arg(w * std::conj(e));
  };
  for (int it = 0; it < 60; ++it) {
    double g = gap(th);
    if (std::abs(g) < 1e-14) break;
    double h = 1e-7;
    double dg = (gap(th + h) - gap(th - h)) / (2 * h);
    if (std::abs(dg) < 1e-12) break;
    double step = g / dg;
    if (std::abs(step) > 0.3) step = std::copysign(0.3, step);
    th -= step;
  }
  Complex e{std::cos(th), std::sin(th)};
  if (std::abs(f.node().eval(point1(e))[0] - e) > 1e-6) return guess;  // not actually fixed
  return BoundaryPoint{point1(e)};
}

namespace {

struct ProbeOutcome {
  enum Kind { Interior, Boundary, Bounded, Exhausted } kind;
  Point limit;
  int iterations = 0;
  double final_boundary_dist = 0;
  double final_increment = 0;
};

ProbeOutcome probe_forward(const HolMap& f, Point z, const IterateConfig& cfg) {
  const Domain& D = f.domain();
  ProbeOutcome out{};
  double min_bd = 1e300;
  Point prev = z;
  for (int n = 0; n < cfg.max_iter; ++n) {
    Point w = f.eval(z);
    double inc = (w - z).norm();
    double bd = D.boundary_dist(w);
    min_bd = std::min(min_bd, bd);
    if (inc < cfg.interior_increment_tol && bd > 10.0 * cfg.boundary_dist_tol) {
      out.kind = ProbeOutcome::Interior;
      out.limit = w;
      out.iterations = n + 1;
      out.final_boundary_dist = bd;
      out.final_increment = inc;
      return out;
    }
    if (bd < cfg.boundary_dist_tol && inc < cfg.boundary_increment_tol) {
      out.kind = ProbeOutcome::Boundary;
      out.limit = w;
      out.iterations = n + 1;
      out.final_boundary_dist = bd;
      out.final_increment = inc;
      return out;
    }
    prev = z;
    z = std::move(w);
  }
  out.iterations = cfg.max_iter;
  out.limit = z;
  out.final_boundary_dist = D.boundary_dist(z);
  out.final_increment = (z - prev).norm();
  if (out.final_boundary_dist < 1e-4) {
    out.kind = ProbeOutcome::Boundary;  // slow (parabolic-like) boundary drift
  } else if (out.final_boundary_dist > 1e-3) {
    out.kind = ProbeOutcome::Bounded;
  } else {
    out.kind = ProbeOutcome::Exhausted;
  }
  return out;
}

// Newton refinement of an interior fixed point, residual <= tol.
bool refine_fixed_point(const HolMap& f, Point& p, double tol) {
  const int d = f.dim();
  for (int it = 0; it < 80; ++it) {
    Point r = f.eval(p) - p;
    if (r.norm() <= tol) return true;
    CMat A = f.jacobian(p) - CMat::Identity(d, d);
    Point step = A.fullPivLu().solve(-r);
    double t = 1.0;
    for (int h = 0; h < 30; ++h) {
      Point cand = p + t * step;
      if (f.domain().contains(cand) && (f.eval(cand) - cand).norm() < r.norm()) {
        p = cand;
        break;
      }
      t *= 0.5;
      if (h == 29) return (f.eval(p) - p).norm() <= tol;
    }
  }
  return (f.eval(p) - p).norm() <= tol;
}

double spectral_radius(const CMat& J) {
  Eigen::ComplexEigenSolver<CMat> es(J, false);
  double sr = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    sr = std::max(sr, std::abs(es.eigenvalues()[i]));
  return sr;
}

}  // namespace

Classification classify(const HolMap& f, const IterateConfig& cfg) {
  const Domain& D = f.domain();
  SplitRng rng(cfg.seed);
  Point probe0 = D.center();
  if ((f.eval(probe0) - probe0).norm() < 1e-14) {
    // center already fixed; probe from an offset as well
  }
  std::vector<Point> probes{probe0, D.center() + rng.in_ball(D.dim(), 0.4)};

  Classification cls;
  json evidence = json::array();
  for (const Point& start : probes) {
    if (!D.contains(start)) continue;
    ProbeOutcome oc = probe_forward(f, start, cfg);
    evidence.push_back({{"start", point_json(start)},
                        {"iterations", oc.iterations},
                        {"boundary_dist", oc.final_boundary_dist},
                        {"increment", oc.final_increment},
                        {"outcome", static_cast<int>(oc.kind)}});
    if (oc.kind == ProbeOutcome::Interior) {
      Point p = oc.limit;
      if (!refine_fixed_point(f, p, cfg.newton_tol))
        throw ClassificationError("interior convergence without a Newton-certified fixed point");
      double sr = spectral_radius(f.jacobian(p));
      cls.spectral_radius = sr;
      if (sr < 1.0 - 1e-9) {
        cls.kind = MapClass::StronglyElliptic;
        cls.fixed_point = p;
      } else {
        cls.kind = MapClass::EllipticNonStrong;
        cls.fixed_point = p;
      }
      cls.evidence = evidence;
      return cls;
    }
    if (oc.kind == ProbeOutcome::Boundary) {
      BoundaryPoint tau = D.boundary_point(D.project_boundary(oc.limit));
      tau = polish_boundary_fixed_point(f, tau);
      DilationEstimate beta = dilation_coefficient(f, tau, D.center());
      if (beta.infinite)
        throw ClassificationError("boundary limit with infinite dilation estimate");
      cls.wolff = tau;
      cls.beta = beta;
      if (beta.value < 1.0 - cfg.classification_margin) {
        cls.kind = MapClass::Hyperbolic;
      } else if (std::abs(beta.value - 1.0) <= cfg.classification_margin) {
        cls.kind = MapClass::Parabolic;
      } else {
        throw ClassificationError("forward orbit reached the boundary but beta_tau > 1");
      }
      cls.evidence = evidence;
      return cls;
    }
    if (oc.kind == ProbeOutcome::Bounded) {
      cls.kind = MapClass::EllipticNonStrong;
      cls.evidence = evidence;
      return cls;
    }
  }
  throw ClassificationError("classification budget exhausted without a stable outcome");
}

std::variant<Point, BoundaryPoint> wolff_point(const HolMap& f, const IterateConfig& cfg) {
  Classification cls = classify(f, cfg);
  switch (cls.kind) {
    case MapClass::StronglyElliptic:
      return *cls.fixed_point;
    case MapClass::Hyperbolic:
    case MapClass::Parabolic:
      return *cls.wolff;
    case MapClass::EllipticNonStrong:
      throw ClassificationError("wolff_point: map is elliptic but not strongly elliptic");
  }
  throw ClassificationError("wolff_point: unreachable");
}

BoundaryFixedPointResult is_boundary_fixed_point(const HolMap& f, const BoundaryPoint& sigma,
                                                 const IterateConfig& cfg) {
  const Domain& D = f.domain();
  if (!D.closed_form())
    throw UnsupportedOperation("is_boundary_fixed_point: needs disk/ball/linear-image domain");
  const double gauges[] = {1.0, 2.0, 4.0};
  const double tol = 1e-6;

  // Approach curves in ball coordinates; mapped through T for linear images.
  Point sb = sigma.coords;
  CMat T = CMat::Identity(D.dim(), D.dim());
  if (D.kind() == DomainKind::LinearImage) {
    T = D.T();
    sb = D.T_inv() * sigma.coords;
    sb /= sb.norm();
  }

  std::vector<std::pair<std::string, std::function<Point(double)>>> curves;
  curves.emplace_back("radial", [sb, T](double t) { return Point(T * (t * sb)); });
  const int d = D.dim();
  if (d == 1) {
    for (double g : gauges) {
      double s = std::sqrt(std::exp(2.0 * g) - 1.0);
      for (double sgn : {+1.0, -1.0}) {
        curves.emplace_back("stolz_" + std::to_string(g) + (sgn > 0 ? "+" : "-"),
                            [sb, T, s, sgn](double t) {
                              Complex o = sb[0] * (1.0 - (1.0 - t) * Complex(1.0, sgn * s));
                              return Point(T * point1(o));
                            });
      }
    }
  } else {
    // complex-tangential direction
    Point v = Point::Zero(d);
    int pick = 0;
    for (int i = 1; i < d; ++i)
      if (std::abs(sb[i]) < std::abs(sb[pick])) pick = i;
    v[pick] = 1.0;
    v -= hermitian(v, sb) * sb;
    v /= v.norm();
    for (double g : gauges) {
      double c = std::sqrt(2.0 * (1.0 - std::exp(-g)));
      for (double sgn : {+1.0, -1.0}) {
        curves.emplace_back("koranyi_" + std::to_string(g) + (sgn > 0 ? "+" : "-"),
                            [sb, T, v, c, sgn](double t) {
                              Point z = t * sb + sgn * c * std::sqrt(1.0 - t) * v;
                              return Point(T * z);
                            });
      }
    }
  }

  BoundaryFixedPointResult out;
  out.detail.title = "boundary fixed point";
  bool all_fixed = true;
  for (auto& [name, curve] : curves) {
    double first = -1, last = 0;
    int used = 0;
    for (int k = 8; k <= 28; ++k) {
      double t = 1.0 - std::ldexp(1.0, -k);
      Point z = curve(t);
      if (!D.contains(z)) continue;
      double gap = (f.eval(z) - sigma.coords).norm();
      if (first < 0) first = gap;
      last = gap;
      ++used;
    }
    bool pass = used >= 5 && last < tol && last < 0.5 * std::max(first, tol);
    all_fixed = all_fixed && pass;
    out.detail.add(CheckResult::make("k_limit_" + name, pass, last, tol, tol,
                                     json{{"samples", used}, {"first_gap", first}}));
    (void)cfg;
  }
  out.fixed = all_fixed;
  out.beta = dilation_coefficient(f, sigma, D.center());
  return out;
}

VerdictReport julia_check(const HolMap& f, const BoundaryPoint& sigma, const BoundaryPoint& tau,
                          const Point& pole, int trials, std::uint64_t seed) {
  const Domain& D = f.domain();
  VerdictReport rep;
  rep.title = "julia inclusion";
  DilationEstimate beta = dilation_coefficient(f, sigma, pole);
  if (beta.infinite) {
    rep.add(CheckResult::make("beta_finite", false, 0, 0, 0, json{{"reason", "beta infinite"}}));
    return rep;
  }
  SplitRng rng(seed);
  double global_max = 0;
  for (double R : {0.25, 1.0, 4.0}) {
    double max_ratio = 0;
    json witness;
    int kept = 0, attempts = 0;
    while (kept < trials && attempts < 200 * trials) {
      ++attempts;
      Point z = D.kind() == DomainKind::LinearImage
                    ? Point(D.T() * rng.in_ball(D.dim()))
                    : Point(rng.in_ball(D.dim()));
      if (!D.contains(z)) continue;
      double hs = horofunction(D, sigma, pole, z);
      if (hs >= R) continue;
      ++kept;
      double ht = horofunction(D, tau, pole, f.eval(z));
      double ratio = ht / hs;
      if (ratio > max_ratio) {
        max_ratio = ratio;
        witness = json{{"z", point_json(z)}, {"h_sigma", hs}, {"h_tau_f", ht}};
      }
    }
    bool pass = kept > 0 && max_ratio <= beta.value * (1.0 + 1e-9);
    global_max = std::max(global_max, max_ratio);
    rep.add(CheckResult::make("julia_R_" + std::to_string(R), pass, max_ratio,
                              beta.value * (1.0 + 1e-9), 1e-9,
                              json{{"witness", witness}, {"kept", kept}}));
  }
  rep.extra = json{{"max_ratio", global_max}, {"beta_sigma", beta.value}};
  return rep;
}

VerdictReport wolff_consistency(const HolMap& f, const IterateConfig& cfg) {
  Classification cls = classify(f, cfg);
  if (!cls.fixed_point_free())
    throw ClassificationError("wolff_consistency: map is not fixed-point free");
  const Domain& D = f.domain();
  const BoundaryPoint& tau = *cls.wolff;
  Point pole = D.center();
  VerdictReport rep;
  rep.title = "wolff point consistency";

  auto bfp = is_boundary_fixed_point(f, tau, cfg);
  double beta = bfp.beta.infinite ? std::numeric_limits<double>::infinity() : bfp.beta.value;
  rep.add(CheckResult::make("boundary_fixed_point_at_tau", bfp.fixed, beta, 1.0 + 1e-6,
                            1e-6, json{{"beta", beta}}));
  rep.add(CheckResult::make("beta_at_most_one", beta <= 1.0 + bfp.beta.error_bar + 1e-6, beta,
                            1.0, 1e-6, bfp.beta.to_json()));

  SplitRng rng(cfg.seed ^ 0x5bf03635ULL);
  double worst = 0;
  json witness;
  for (int i = 0; i < 1000; ++i) {
    Point z = D.kind() == DomainKind::LinearImage ? Point(D.T() * rng.in_ball(D.dim()))
                                                  : Point(rng.in_ball(D.dim()));
    if (!D.contains(z)) continue;
    double hz = horofunction(D, tau, pole, z);
    double hf = horofunction(D, tau, pole, f.eval(z));
    double ratio = hf / hz;
    if (ratio > worst) {
      worst = ratio;
      witness = json{{"z", point_json(z)}, {"h", hz}, {"h_f", hf}};
    }
  }
  rep.add(CheckResult::make("horosphere_invariance", worst <= 1.0 + 1e-9, worst, 1.0 + 1e-9,
                            1e-9, witness));

  // independent forward orbit from a fresh start
  Point start = D.center() + rng.in_ball(D.dim(), 0.35);
  ProbeOutcome oc = probe_forward(f, start, cfg);
  bool reached = oc.kind == ProbeOutcome::Boundary;
  double gap = 1e300;
  if (reached) {
    BoundaryPoint lim = D.boundary_point(D.project_boundary(oc.limit));
    lim = polish_boundary_fixed_point(f, lim);
    gap = (lim.coords - tau.coords).norm();
  }
  rep.add(CheckResult::make("forward_orbit_limit", reached && gap < 1e-6, gap, 1e-6, 1e-6,
                            json{{"iterations", oc.iterations}}));
  rep.extra = cls.to_json();
  return rep;
}

ContractionEstimate contraction_constant(const HolMap& f, const Point& p, double R0, int samples,
                                         std::uint64_t seed, const std::vector<Point>* extra) {
  const Domain& D = f.domain();
  if (!D.contains(p)) throw DomainError("contraction_constant: pole outside the domain");
  SplitRng rng(seed);
  ContractionEstimate out;
  out.sup = -1e300;
  auto consider = [&](const Point& z) {
    if (!D.contains(z)) return;
    double kz;
    try {
      kz = distance(D, z, p);
    } catch (const DomainError&) {
      return;
    }
    if (kz < R0 - 1e-12) return;
    double g = distance(D, f.eval(z), p) - kz;
    if (g > out.sup) {
      out.sup = g;
      out.witness = z;
    }
  };
  // Kobayashi spheres around p, radii R0 .. R0+6
  const int shells = 25;
  int per_shell = std::max(8, samples / shells);
  for (int j = 0; j < shells; ++j) {
    double R = R0 + 0.25 * j;
    double r = std::tanh(R);
    for (int i = 0; i < per_shell; ++i) {
      Point dir = rng.direction(D.dim());
      Point zb = ball_mobius(D.kind() == DomainKind::LinearImage ? Point(D.T_inv() * p) : p,
                             r * dir);
      Point z = D.kind() == DomainKind::LinearImage ? Point(D.T() * zb) : zb;
      consider(z);
    }
  }
  if (extra)
    for (const Point& z : *extra) consider(z);
  out.c = std::exp(2.0 * out.sup);
  out.contradiction = out.sup >= 0.0;
  return out;
}

}  // namespace kobdyn
