#include "kobdyn/backward.hpp"

#include <algorithm>
#include <cmath>

#include "kobdyn/errors.hpp"
#include "kobdyn/geodesic.hpp"
#include "kobdyn/horosphere.hpp"
#include "kobdyn/metric.hpp"
#include "kobdyn/numerics.hpp"

namespace kobdyn {

using nlohmann::json;

namespace {

constexpr double kDistanceCap = 20.0;

json point_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back({p[i].real(), p[i].imag()});
  return a;
}

double guarded_distance(const Domain& D, const Point& a, const Point& b, bool* capped) {
  try {
    return distance(D, a, b);
  } catch (const DomainError&) {
    if (capped) *capped = true;
    return kDistanceCap;
  }
}

// ---- quad mirror of the closed-form domain kit -----------------------------

struct QDomain {
  DomainKind kind;
  int dim;
  std::vector<QVec> Tinv;  // rows, linear images only

  explicit QDomain(const Domain& D) : kind(D.kind()), dim(D.dim()) {
    if (kind == DomainKind::LinearImage) {
      const CMat& M = D.T_inv();
      Tinv.resize(M.rows());
      for (Eigen::Index r = 0; r < M.rows(); ++r) {
        Tinv[r].resize(M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c) Tinv[r][c] = qcomplex(M(r, c));
      }
    }
  }

  QVec pull(const QVec& z) const {
    if (kind != DomainKind::LinearImage) return z;
    QVec out(dim, qcomplex(0.0));
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) out[r] = out[r] + Tinv[r][c] * z[c];
    return out;
  }

  bool contains(const QVec& z) const { return q_norm2(pull(z)) < 1; }

  qreal boundary_dist(const QVec& z) const {
    // exact for disk/ball; gauge-based lower-order proxy for linear images
    QVec b = pull(z);
    return qreal(1) - q_norm(b);
  }

  qreal dist(const QVec& a, const QVec& b, bool* capped) const {
    QVec x = pull(a), y = pull(b);
    qreal nz = q_norm2(x), nw = q_norm2(y);
    if (nz >= 1 || nw >= 1) {
      if (capped) *capped = true;
      return kDistanceCap;
    }
    qreal d = q_ball_dist(x, y);
    if (!(d < kDistanceCap * 4)) {
      if (capped) *capped = true;
      return kDistanceCap;
    }
    return d;
  }

  qreal horofunction(const QVec& tau, const QVec& pole, const QVec& z) const {
    QVec t = pull(tau), p = pull(pole), x = pull(z);
    qreal nt = q_norm(t);
    for (auto& c : t) c = (qreal(1) / nt) * c;
    return q_ball_horofunction0(t, x) / q_ball_horofunction0(t, p);
  }
};

QVec to_q(const Point& p) { return to_qvec(p.data(), static_cast<int>(p.size())); }

Point from_q(const QVec& q) {
  Point p(static_cast<int>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) p[static_cast<int>(i)] = to_std(q[i]);
  return p;
}

struct QCandidate {
  QVec point;
  qreal step;
};

// Admissible preimage selection shared by the double and quad paths.
template <typename Cand>
int select_candidate(std::vector<Cand>& cands, BranchPolicy policy) {
  int best = -1;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (best < 0 || cands[i].key < cands[best].key) best = static_cast<int>(i);
  }
  (void)policy;
  return best;
}

}  // namespace

Point backward_step(const HolMap& f, const Point& z, const BackwardConfig& cfg) {
  const Domain& D = f.domain();
  PreimageSet pre = f.preimages(z, cfg.newton);  // throws NoPreimageError when empty
  struct Cand {
    Point w;
    double key;
    double step;
  };
  std::vector<Cand> cands;
  for (const auto& sol : pre.solutions) {
    if (!D.contains(sol.point)) continue;
    bool capped = false;
    double s = guarded_distance(D, sol.point, z, &capped);
    if (capped || s > cfg.a_max + 1e-12) continue;
    double key = (cfg.policy == BranchPolicy::TowardSigma && cfg.toward)
                     ? (sol.point - *cfg.toward).norm()
                     : s;
    cands.push_back({sol.point, key, s});
  }
  if (cands.empty())
    throw BoundedStepError("no admissible preimage within step bound a_max = " +
                           std::to_string(cfg.a_max));
  int best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (cands[i].key < cands[best].key) best = static_cast<int>(i);
  return cands[best].w;
}

namespace {

OrbitRecord backward_orbit_quad(const HolMap& f, const Point& z0, int n,
                                const BackwardConfig& cfg) {
  const Domain& D = f.domain();
  QDomain qd(D);
  auto trace = std::make_shared<QuadTrace>();
  OrbitRecord orb;
  orb.direction = OrbitDirection::Backward;
  QVec z = to_q(z0);
  trace->points.push_back(z);
  orb.points.push_back(z0);
  std::optional<QVec> toward;
  if (cfg.toward) toward = to_q(*cfg.toward);
  for (int i = 0; i < n; ++i) {
    std::vector<QVec> pre;
    try {
      pre = f.preimages_q(z);
    } catch (const Error&) {
      orb.truncated = true;
      orb.note = "quad preimage branch failed";
      break;
    }
    struct Cand {
      QVec w;
      qreal key;
      qreal step;
    };
    std::vector<Cand> cands;
    for (auto& w : pre) {
      if (!qd.contains(w)) continue;
      bool capped = false;
      qreal s = qd.dist(w, z, &capped);
      if (capped) orb.distance_capped = true;
      if (capped || to_double(s) > cfg.a_max + 1e-12) continue;
      qreal key = s;
      if (cfg.policy == BranchPolicy::TowardSigma && toward)
        key = q_norm(q_sub(w, *toward));
      cands.push_back({std::move(w), key, s});
    }
    if (cands.empty()) {
      orb.truncated = true;
      orb.note = "bounded-step failure at index " + std::to_string(i);
      break;
    }
    int best = 0;
    for (std::size_t c = 1; c < cands.size(); ++c)
      if (cands[c].key < cands[best].key) best = static_cast<int>(c);
    QVec w = std::move(cands[best].w);
    // residual ||f(w) - z|| in quad
    QVec fw = f.eval_q(w);
    orb.residuals.push_back(to_double(q_norm(q_sub(fw, z))));
    orb.steps.push_back(to_double(cands[best].step));
    z = std::move(w);
    trace->points.push_back(z);
    orb.points.push_back(from_q(z));
  }
  orb.quad = trace;
  return orb;
}

OrbitRecord backward_orbit_double(const HolMap& f, const Point& z0, int n,
                                  const BackwardConfig& cfg) {
  const Domain& D = f.domain();
  OrbitRecord orb;
  orb.direction = OrbitDirection::Backward;
  orb.points.push_back(z0);
  Point z = z0;
  for (int i = 0; i < n; ++i) {
    Point w;
    try {
      w = backward_step(f, z, cfg);
    } catch (const Error& e) {
      orb.truncated = true;
      orb.note = std::string("stopped: ") + e.what();
      break;
    }
    orb.residuals.push_back((f.node().eval(w) - z).norm());
    orb.steps.push_back(guarded_distance(D, w, z, &orb.distance_capped));
    z = w;
    orb.points.push_back(z);
  }
  return orb;
}

void finalize_orbit(OrbitRecord& orb, const Domain& D, const BackwardConfig& cfg) {
  for (double s : orb.steps) orb.step_sup = std::max(orb.step_sup, s);
  if (orb.points.size() >= 2) {
    const Point& last = orb.points.back();
    double inc = (last - orb.points[orb.points.size() - 2]).norm();
    double bd = D.boundary_dist(last);
    if (bd < cfg.boundary_tol && inc < cfg.increment_tol) {
      orb.converged_boundary = true;
      orb.boundary_limit = D.project_boundary(last);
    }
  }
}

}  // namespace

OrbitRecord backward_orbit(const HolMap& f, const Point& z0, int n, const BackwardConfig& cfg) {
  if (!f.domain().contains(z0)) throw DomainError("backward_orbit: start outside the domain");
  OrbitRecord orb;
  if (cfg.use_quad && f.quad_capable())
    orb = backward_orbit_quad(f, z0, n, cfg);
  else
    orb = backward_orbit_double(f, z0, n, cfg);
  finalize_orbit(orb, f.domain(), cfg);
  return orb;
}

void attach_diagnostics(OrbitRecord& orbit, const HolMap& f, const Classification& cls,
                        const Point& pole) {
  const Domain& D = f.domain();
  const std::size_t n = orbit.points.size();
  const bool have_quad = orbit.quad && orbit.quad->points.size() == n && D.closed_form();

  orbit.t_seq.clear();
  orbit.s_seq.clear();
  orbit.gauges.clear();

  std::optional<QDomain> qd;
  if (have_quad) qd.emplace(D);

  if (cls.fixed_point_free() && cls.wolff) {
    const BoundaryPoint& tau = *cls.wolff;
    QVec qtau, qpole;
    if (have_quad) {
      qtau = to_q(tau.coords);
      qpole = to_q(pole);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double h;
      if (have_quad) {
        h = to_double(qd->horofunction(qtau, qpole, orbit.quad->points[i]));
      } else {
        h = horofunction(D, tau, pole, orbit.points[i]);
      }
      orbit.t_seq.push_back(h);
    }
  }

  if (cls.kind == MapClass::StronglyElliptic && cls.fixed_point) {
    const Point& p = *cls.fixed_point;
    QVec qp;
    if (have_quad) qp = to_q(p);
    for (std::size_t i = 0; i < n; ++i) {
      double k;
      if (have_quad) {
        bool capped = false;
        k = to_double(qd->dist(orbit.quad->points[i], qp, &capped));
        if (capped) orbit.distance_capped = true;
      } else {
        k = guarded_distance(D, orbit.points[i], p, &orbit.distance_capped);
      }
      orbit.s_seq.push_back(std::exp(-2.0 * k));
    }
  }

  if (orbit.boundary_limit) {
    BoundaryPoint sig = D.boundary_point(*orbit.boundary_limit);
    QVec qs, qpole2;
    if (have_quad) {
      qs = to_q(sig.coords);
      qpole2 = to_q(pole);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double g;
      if (have_quad) {
        bool capped = false;
        qreal h = qd->horofunction(qs, qpole2, orbit.quad->points[i]);
        qreal k = qd->dist(orbit.quad->points[i], qpole2, &capped);
        if (capped) orbit.distance_capped = true;
        g = to_double(qreal(0.5) * q_log(h) + k);
      } else {
        try {
          g = kregion_gauge(D, sig, pole, orbit.points[i]);
        } catch (const DomainError&) {
          orbit.distance_capped = true;
          g = kDistanceCap;
        }
      }
      orbit.gauges.push_back(g);
    }
  }
}

IsolationWindow default_window(const HolMap& f, const BoundaryPoint& sigma, double beta_sigma,
                               const std::vector<std::pair<BoundaryPoint, double>>& catalogued) {
  IsolationWindow win;
  win.center = sigma;
  win.beta_cap = beta_sigma;
  double r = 0.5;
  Classification cls = classify(f);
  if (cls.fixed_point_free() && cls.wolff)
    r = std::min(r, 0.5 * (cls.wolff->coords - sigma.coords).norm());
  if (cls.fixed_point)
    r = std::min(r, 0.9 * (*cls.fixed_point - sigma.coords).norm());
  for (const auto& [bp, beta] : catalogued) {
    double d = (bp.coords - sigma.coords).norm();
    if (d < 1e-9) continue;  // sigma itself
    if (beta <= beta_sigma + 1e-9) r = std::min(r, 0.5 * d);
  }
  win.radius = r;
  return win;
}

OrbitRecord construct_backward_orbit_at(const HolMap& f, const BoundaryPoint& sigma,
                                        const IsolationWindow& window,
                                        const ConstructConfig& cfg) {
  const Domain& D = f.domain();
  if (!D.closed_form())
    throw UnsupportedOperation("construct_backward_orbit_at: needs a closed-form domain");
  const Point pole = cfg.pole.value_or(D.center());

  Classification cls = classify(f);
  DilationEstimate beta = dilation_coefficient(f, sigma, pole);
  if (beta.infinite || !(beta.value > 1.0 + 1e-6))
    throw ClassificationError("construct_backward_orbit_at: sigma is not repelling");

  if (cls.fixed_point_free() && cls.wolff) {
    if ((cls.wolff->coords - sigma.coords).norm() <= window.radius)
      throw IsolationViolation("isolation window contains the Wolff point");
  } else if (cls.fixed_point) {
    if ((*cls.fixed_point - sigma.coords).norm() <= window.radius)
      throw IsolationViolation("isolation window contains the interior Wolff point");
  }

  // Smallest n0 with the closed-form horosphere inside the window (margin).
  double op_norm = 1.0;
  if (D.kind() == DomainKind::LinearImage) {
    Eigen::JacobiSVD<CMat> svd(D.T());
    op_norm = svd.singularValues()(0);
  }
  int n0 = 0;
  while (n0 < 400 && 2.0 * op_norm * std::sqrt(std::pow(beta.value, -n0)) >
                         cfg.window_margin * window.radius)
    ++n0;

  Geodesic phi = geodesic_through(D, pole, sigma);

  struct ExitRecord {
    int k = 0;
    int n_exit = 0;
    std::vector<Point> traj;  // f^j(r_k), j = 0..n_exit
    Point exit_point;
  };
  std::vector<ExitRecord> exits;

  for (int k = 0; k < cfg.family; ++k) {
    double R = std::pow(beta.value, -(n0 + k));
    double t = (1.0 - R) / (1.0 + R);
    Point r = phi.eval(t);
    if (!D.contains(r)) break;
    Point fr = f.eval(r);
    // discretized segment gamma_k from r to f(r)
    std::vector<Point> seg(cfg.seg_samples);
    for (int i = 0; i < cfg.seg_samples; ++i) {
      double s = static_cast<double>(i) / (cfg.seg_samples - 1);
      seg[i] = (1.0 - s) * r + s * fr;
    }
    ExitRecord rec;
    rec.k = k;
    rec.traj.push_back(r);
    bool exited = false;
    for (int nstep = 1; nstep <= cfg.max_forward; ++nstep) {
      for (auto& p : seg) p = f.eval(p);
      rec.traj.push_back(seg.front());  // seg.front() tracks f^n(r_k)
      bool hit = false;
      for (const auto& p : seg)
        if ((p - sigma.coords).norm() >= window.radius) { hit = true; break; }
      if (hit) {
        rec.n_exit = nstep;
        rec.exit_point = rec.traj.back();
        exited = true;
        break;
      }
    }
    if (!exited) continue;  // never left the window within budget
    exits.push_back(std::move(rec));
  }

  if (exits.size() < static_cast<std::size_t>(cfg.stable_run))
    throw IsolationViolation("first-exit family too small to stabilize");

  // Guard against exit points accumulating on the boundary (the isolation
  // hypothesis failing): inspect the tail of the family.
  {
    int near_boundary = 0;
    for (std::size_t i = exits.size() - std::min<std::size_t>(3, exits.size());
         i < exits.size(); ++i)
      if (D.boundary_dist(exits[i].exit_point) < 1e-3) ++near_boundary;
    if (near_boundary >= 3) {
      json cluster = json::array();
      for (const auto& e : exits) cluster.push_back(point_json(e.exit_point));
      throw IsolationViolation("exit family accumulates on the boundary inside the window; "
                               "offending cluster recorded");
    }
  }

  // Proximity clustering of the exit points; require a trailing run of
  // `stable_run` consecutive k indices in one cluster.
  struct Cluster {
    Point rep;
    std::vector<int> members;  // indices into `exits`
  };
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < exits.size(); ++i) {
    bool placed = false;
    for (auto& c : clusters)
      if ((exits[i].exit_point - c.rep).norm() < cfg.cluster_eps) {
        c.members.push_back(static_cast<int>(i));
        placed = true;
        break;
      }
    if (!placed) clusters.push_back({exits[i].exit_point, {static_cast<int>(i)}});
  }
  int chosen = -1;
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const auto& mem = clusters[ci].members;
    int run = 1;
    for (std::size_t j = 1; j < mem.size(); ++j) {
      run = (exits[mem[j]].k == exits[mem[j - 1]].k + 1) ? run + 1 : 1;
      if (run >= cfg.stable_run &&
          (chosen < 0 || exits[mem[j]].k > exits[clusters[chosen].members.back()].k))
        chosen = static_cast<int>(ci);
    }
  }
  if (chosen < 0)
    throw IsolationViolation("exit clustering failed to stabilize (no consecutive run)");

  const ExitRecord& star = exits[clusters[chosen].members.back()];

  // Chain extraction: w_j = f^{n-j}(r_{k*}) is an exact backward orbit from
  // the exit point back to r_{k*}.
  OrbitRecord orb;
  orb.direction = OrbitDirection::Backward;
  for (int j = star.n_exit; j >= 0; --j) orb.points.push_back(star.traj[j]);

  // Toward-sigma extension until the orbit is extend_target-close to sigma.
  const double bound = 0.5 * std::log(beta.value) + cfg.slack;
  BackwardConfig bcfg;
  bcfg.a_max = bound;
  bcfg.policy = BranchPolicy::TowardSigma;
  bcfg.toward = sigma.coords;
  Point z = orb.points.back();
  while (static_cast<int>(orb.points.size()) < cfg.max_len &&
         (z - sigma.coords).norm() > cfg.extend_target) {
    Point w;
    try {
      w = backward_step(f, z, bcfg);
    } catch (const Error& e) {
      orb.truncated = true;
      orb.note = std::string("extension stopped: ") + e.what();
      break;
    }
    orb.points.push_back(w);
    z = w;
  }

  // Steps and residuals over the assembled chain.
  for (std::size_t i = 0; i + 1 < orb.points.size(); ++i) {
    orb.residuals.push_back((f.node().eval(orb.points[i + 1]) - orb.points[i]).norm());
    orb.steps.push_back(guarded_distance(D, orb.points[i + 1], orb.points[i],
                                         &orb.distance_capped));
  }
  for (double s : orb.steps) orb.step_sup = std::max(orb.step_sup, s);
  if ((orb.points.back() - sigma.coords).norm() < 1e-3) {
    orb.converged_boundary = true;
    orb.boundary_limit = sigma.coords;
  }
  orb.note += orb.note.empty() ? "" : "; ";
  orb.note += "n0=" + std::to_string(n0) + " k*=" + std::to_string(star.k) +
              " exit_n=" + std::to_string(star.n_exit);
  attach_diagnostics(orb, f, cls, pole);
  return orb;
}

VerdictReport step_limit_check(const HolMap& f, const BoundaryPoint& sigma, const Point& pole,
                               double tol) {
  const Domain& D = f.domain();
  DilationEstimate beta = dilation_coefficient(f, sigma, pole);
  VerdictReport rep;
  rep.title = "geodesic displacement limit";
  if (beta.infinite) {
    rep.add(CheckResult::make("beta_finite", false, 0, 0, 0,
                              json{{"reason", "dilation estimate infinite"}}));
    return rep;
  }
  Geodesic phi = geodesic_through(D, pole, sigma);
  std::vector<double> vals;
  bool truncated = false;
  for (int k = 2; k <= 8; ++k) {
    double t = 1.0 - std::pow(10.0, -k);
    Point zt = phi.eval(t);
    if (!D.contains(zt)) { truncated = true; break; }
    try {
      vals.push_back(distance(D, zt, f.eval(zt)));
    } catch (const DomainError&) {
      truncated = true;
      break;
    }
  }
  if (vals.size() < 3) {
    rep.add(CheckResult::make("sample_count", false, static_cast<double>(vals.size()), 3, 0,
                              json{{"truncated", truncated}}));
    return rep;
  }
  Extrapolation ex = richardson(vals, 0.1);
  double target = 0.5 * std::abs(std::log(beta.value));
  double dev = std::abs(ex.value - target);
  rep.add(CheckResult::make("radial_step_limit", dev <= tol, ex.value, target, tol,
                            json{{"deviation", dev}, {"err_est", ex.error}}));
  rep.extra = json{{"beta_sigma", beta.value}, {"limit_estimate", ex.value},
                   {"deviation", dev}, {"truncated", truncated}};
  return rep;
}

VerdictReport limsup_step_fixedpoint_check(const HolMap& f, const OrbitRecord& orbit) {
  VerdictReport rep;
  rep.title = "limsup step => boundary fixed point";
  if (!orbit.converged_boundary || !orbit.boundary_limit) {
    rep.add(CheckResult::make("vacuous_interior_limit", true, 0, 0, 0));
    rep.extra = json{{"note", "orbit has no boundary limit; nothing to check"}};
    return rep;
  }
  const Domain& D = f.domain();
  BoundaryPoint sigma = D.boundary_point(*orbit.boundary_limit);
  double limsup = orbit.step_limsup_tail();
  double alpha = std::exp(2.0 * limsup);
  auto bfp = is_boundary_fixed_point(f, sigma);
  rep.add(CheckResult::make("boundary_fixed_point", bfp.fixed, bfp.fixed ? 1.0 : 0.0, 1.0, 0));
  double beta = bfp.beta.infinite ? std::numeric_limits<double>::infinity() : bfp.beta.value;
  rep.add(CheckResult::make("beta_le_alpha", beta <= alpha * (1.0 + 1e-6) + bfp.beta.error_bar,
                            beta, alpha, 1e-6, bfp.beta.to_json()));
  rep.extra = json{{"alpha", alpha}, {"beta_sigma", beta}, {"limsup_step", limsup}};
  return rep;
}

VerdictReport theorem01_suite(const HolMap& f, const OrbitRecord& orbit_in, const Point& pole) {
  const Domain& D = f.domain();
  Classification cls = classify(f);
  OrbitRecord orbit = orbit_in;
  if (orbit.t_seq.empty() && orbit.s_seq.empty()) attach_diagnostics(orbit, f, cls, pole);

  VerdictReport rep;
  rep.title = "backward convergence theorem";

  // (i) single boundary limit, repelling or parabolic
  bool has_limit = orbit.converged_boundary && orbit.boundary_limit.has_value();
  rep.add(CheckResult::make("i_boundary_limit", has_limit, has_limit ? 1.0 : 0.0, 1.0, 0,
                            json{{"note", orbit.note}}));
  if (!has_limit) return rep;

  BoundaryPoint sigma = D.boundary_point(*orbit.boundary_limit);
  // snap to the polished Wolff point when the limit coincides with it
  double sigma_tau_gap = std::numeric_limits<double>::infinity();
  if (cls.fixed_point_free() && cls.wolff) {
    sigma_tau_gap = (sigma.coords - cls.wolff->coords).norm();
    if (sigma_tau_gap <= 1e-3) sigma = *cls.wolff;
  }
  DilationEstimate beta = dilation_coefficient(f, sigma, pole);
  double beta_v = beta.infinite ? std::numeric_limits<double>::infinity() : beta.value;
  rep.add(CheckResult::make("i_beta_at_least_one", beta_v >= 1.0 - 1e-6 - beta.error_bar,
                            beta_v, 1.0, 1e-6, beta.to_json()));
  double alpha = std::exp(2.0 * orbit.step_sup);
  rep.add(CheckResult::make("i_beta_le_alpha", beta_v <= alpha * (1.0 + 1e-6) + beta.error_bar,
                            beta_v, alpha, 1e-6));

  // (ii) strongly elliptic / hyperbolic force a repelling limit
  if (cls.kind == MapClass::Hyperbolic || cls.kind == MapClass::StronglyElliptic) {
    rep.add(CheckResult::make("ii_repelling", beta_v > 1.0 + 1e-6, beta_v, 1.0, 1e-6));
  } else {
    rep.add(CheckResult::make("ii_repelling_not_applicable", true, beta_v, 1.0, 0));
  }

  // (iii) sigma = tau only for parabolic maps
  if (cls.fixed_point_free()) {
    bool same = sigma_tau_gap <= 1e-3;
    bool ok = !same || cls.kind == MapClass::Parabolic;
    rep.add(CheckResult::make("iii_sigma_equals_tau_implies_parabolic", ok, sigma_tau_gap,
                              1e-3, 1e-3,
                              json{{"kind", to_string(cls.kind)}, {"sigma_eq_tau", same}}));
  } else {
    rep.add(CheckResult::make("iii_interior_wolff", true, 0, 0, 0));
  }

  // (iv) K-region gauge boundedness along the orbit (fitted amplitude)
  if (orbit.gauges.empty()) {
    rep.add(CheckResult::make("iv_gauge_recorded", false, 0, 1, 0,
                              json{{"reason", "no gauge diagnostics"}}));
  } else {
    std::size_t n0 = orbit.gauges.size() / 4;
    double sup = -1e300;
    bool finite = true;
    for (std::size_t i = n0; i < orbit.gauges.size(); ++i) {
      if (!std::isfinite(orbit.gauges[i])) finite = false;
      sup = std::max(sup, orbit.gauges[i]);
    }
    double fitted_M = std::exp(sup);
    double tail_growth = orbit.gauges.back() -
                         orbit.gauges[n0 + (orbit.gauges.size() - n0) / 2];
    rep.add(CheckResult::make("iv_gauge_bounded", finite, sup, sup, 0,
                              json{{"finite", finite}}));
    rep.extra = json{{"fitted_log_M", sup}, {"fitted_M", fitted_M},
                     {"gauge_tail_growth", tail_growth},
                     {"classification", cls.to_json()},
                     {"beta_sigma", beta_v}, {"alpha", alpha}};
  }
  return rep;
}

VerdictReport inequality_battery(const HolMap& f, const OrbitRecord& orbit_in, const Point& pole) {
  const Domain& D = f.domain();
  Classification cls = classify(f);
  OrbitRecord orbit = orbit_in;
  if (orbit.t_seq.empty() && orbit.s_seq.empty()) attach_diagnostics(orbit, f, cls, pole);

  VerdictReport rep;
  rep.title = "per-step inequality battery";
  json extra;

  if (cls.fixed_point_free() && !orbit.t_seq.empty() && cls.beta) {
    double beta_tau = cls.beta->value;
    double worst = 1e300;
    int worst_idx = -1;
    for (std::size_t i = 0; i + 1 < orbit.t_seq.size(); ++i) {
      double ratio = orbit.t_seq[i + 1] * beta_tau / orbit.t_seq[i];
      if (ratio < worst) {
        worst = ratio;
        worst_idx = static_cast<int>(i);
      }
    }
    rep.add(CheckResult::make("horofunction_growth", worst >= 1.0 - 1e-9, worst, 1.0, 1e-9,
                              json{{"worst_index", worst_idx}}));
    extra["beta_tau"] = beta_tau;
  }

  if (cls.kind == MapClass::StronglyElliptic && !orbit.s_seq.empty() && cls.fixed_point) {
    const Point& p = *cls.fixed_point;
    double R0 = guarded_distance(D, orbit.points.front(), p, nullptr);
    std::vector<Point> extra_pts(orbit.points.begin(), orbit.points.end());
    ContractionEstimate ce = contraction_constant(f, p, R0, 4096, 2024, &extra_pts);
    rep.add(CheckResult::make("contraction_constant_below_one", !ce.contradiction && ce.c < 1.0,
                              ce.c, 1.0, 0, ce.to_json()));
    double worst = -1e300;
    int worst_idx = -1;
    for (std::size_t i = 0; i + 1 < orbit.s_seq.size(); ++i) {
      double ratio = orbit.s_seq[i + 1] / (orbit.s_seq[i] * ce.c);
      if (ratio > worst) {
        worst = ratio;
        worst_idx = static_cast<int>(i);
      }
    }
    rep.add(CheckResult::make("contraction_decay", worst <= 1.0 + 1e-9, worst, 1.0, 1e-9,
                              json{{"worst_index", worst_idx}}));
    extra["contraction"] = ce.to_json();
    extra["R0"] = R0;
  }

  // Boundary-distance Cauchy estimate: fit the smallest C with
  // ||z_n - z_{n+1}|| <= C / sqrt(1 - a_hat^2) sqrt(d(z_n)), then check the
  // geometric decay of sqrt(d(z_n)) that turns it into a Cauchy bound.
  {
    double a_hat = std::tanh(orbit.step_sup);
    double scale = std::sqrt(1.0 - a_hat * a_hat);
    const bool have_quad = orbit.quad && orbit.quad->points.size() == orbit.points.size() &&
                           D.closed_form();
    std::optional<QDomain> qd;
    if (have_quad) qd.emplace(D);
    std::vector<double> sq_bd(orbit.points.size());
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
      double bd = have_quad ? to_double(qd->boundary_dist(orbit.quad->points[i]))
                            : D.boundary_dist(orbit.points[i]);
      sq_bd[i] = bd > 0 ? std::sqrt(bd) : 0.0;
    }
    double C_fit = 0;
    bool usable = orbit.points.size() >= 3;
    for (std::size_t i = 0; i + 1 < orbit.points.size() && usable; ++i) {
      if (sq_bd[i] <= 0) { usable = false; break; }
      double inc = (orbit.points[i + 1] - orbit.points[i]).norm();
      C_fit = std::max(C_fit, inc * scale / sq_bd[i]);
    }
    if (usable && orbit.converged_boundary) {
      double q = 0;
      std::size_t from = orbit.points.size() / 2;
      for (std::size_t i = from; i + 1 < orbit.points.size(); ++i)
        if (sq_bd[i] > 0) q = std::max(q, sq_bd[i + 1] / sq_bd[i]);
      rep.add(CheckResult::make("sqrt_boundary_dist_geometric", q < 1.0 - 1e-6, q, 1.0, 1e-6));
      // closed-form geometric-sum Cauchy bound against the observed sweep
      bool cauchy_ok = q < 1.0;
      double worst_excess = 0;
      if (cauchy_ok) {
        const Point& zlast = orbit.points.back();
        for (std::size_t i = 0; i < orbit.points.size(); ++i) {
          double bound = (C_fit / scale) * sq_bd[i] / (1.0 - q) * (1.0 + 1e-9) + 1e-15;
          double obs = (zlast - orbit.points[i]).norm();
          if (obs > bound) {
            cauchy_ok = false;
            worst_excess = obs - bound;
          }
        }
      }
      rep.add(CheckResult::make("cauchy_bound", cauchy_ok, worst_excess, 0, 1e-9));
      extra["C_fit"] = C_fit;
      extra["q_fit"] = q;
      extra["a_hat"] = a_hat;
    } else {
      rep.add(CheckResult::make("cauchy_bound_vacuous", true, 0, 0, 0,
                                json{{"reason", "no boundary limit or degenerate distances"}}));
    }
  }

  rep.extra = extra;
  return rep;
}

}  // namespace kobdyn
