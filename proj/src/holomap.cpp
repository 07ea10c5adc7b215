#include "kobdyn/holomap.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "kobdyn/errors.hpp"
#include "kobdyn/rng.hpp"

namespace kobdyn {

using nlohmann::json;

CMat MapNode::jacobian(const Point& z) const {
  // central differences, h = 1e-6, complex step along each coordinate
  const int d = dim();
  const double h = 1e-6;
  CMat J(d, d);
  for (int j = 0; j < d; ++j) {
    Point zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    Point col = (eval(zp) - eval(zm)) / (2.0 * h);
    J.col(j) = col;
  }
  return J;
}

QVec MapNode::eval_q(const QVec&) const {
  throw UnsupportedOperation("quad evaluation not available for " + kind());
}

std::vector<QVec> MapNode::closed_preimages_q(const QVec&) const {
  throw UnsupportedOperation("quad preimages not available for " + kind());
}

namespace {

Point from_q(const QVec& q) {
  Point p(static_cast<int>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) p[static_cast<int>(i)] = to_std(q[i]);
  return p;
}

struct DiskMobiusNode : MapNode {
  double a;
  explicit DiskMobiusNode(double a_) : a(a_) {
    if (!(a > -1.0 && a < 1.0)) throw ConfigError("disk_mobius: a must lie in (-1,1)");
  }
  int dim() const override { return 1; }
  std::string kind() const override { return "disk_mobius"; }
  Point eval(const Point& z) const override {
    return point1((z[0] + a) / (1.0 + a * z[0]));
  }
  CMat jacobian(const Point& z) const override {
    CMat J(1, 1);
    Complex d = 1.0 + a * z[0];
    J(0, 0) = (1.0 - a * a) / (d * d);
    return J;
  }
  bool has_closed_preimages() const override { return true; }
  std::vector<Point> closed_preimages(const Point& z) const override {
    return {point1((z[0] - a) / (1.0 - a * z[0]))};
  }
  bool quad_capable() const override { return true; }
  QVec eval_q(const QVec& z) const override {
    qcomplex qa(a);
    return {(z[0] + qa) / (qcomplex(1.0) + qa * z[0])};
  }
  std::vector<QVec> closed_preimages_q(const QVec& z) const override {
    qcomplex qa(a);
    return {{(z[0] - qa) / (qcomplex(1.0) - qa * z[0])}};
  }
  bool boundary_evaluable() const override { return true; }
  json to_json() const override { return {{"type", "disk_mobius"}, {"a", a}}; }
};

// z -> z (z + a) / (1 + a z)
struct DiskBlaschkeQuadNode : MapNode {
  double a;
  explicit DiskBlaschkeQuadNode(double a_) : a(a_) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("disk_blaschke_quad: a must lie in (0,1)");
  }
  int dim() const override { return 1; }
  std::string kind() const override { return "disk_blaschke_quad"; }
  Point eval(const Point& z) const override {
    return point1(z[0] * (z[0] + a) / (1.0 + a * z[0]));
  }
  CMat jacobian(const Point& z) const override {
    CMat J(1, 1);
    Complex d = 1.0 + a * z[0];
    J(0, 0) = (2.0 * z[0] + a + a * z[0] * z[0]) / (d * d);
    return J;
  }
  bool has_closed_preimages() const override { return true; }
  std::vector<Point> closed_preimages(const Point& w) const override {
    // roots of z^2 + a(1 - w) z - w = 0 inside the disk
    Complex b = a * (1.0 - w[0]);
    Complex disc = std::sqrt(b * b + 4.0 * w[0]);
    std::vector<Point> out;
    for (Complex root : {(-b + disc) / 2.0, (-b - disc) / 2.0})
      if (std::abs(root) < 1.0) out.push_back(point1(root));
    return out;
  }
  bool quad_capable() const override { return true; }
  QVec eval_q(const QVec& z) const override {
    qcomplex qa(a);
    return {z[0] * (z[0] + qa) / (qcomplex(1.0) + qa * z[0])};
  }
  std::vector<QVec> closed_preimages_q(const QVec& w) const override {
    qcomplex qa(a);
    qcomplex b = qa * (qcomplex(1.0) - w[0]);
    qcomplex disc = q_sqrt(b * b + qcomplex(4.0) * w[0]);
    std::vector<QVec> out;
    for (qcomplex root : {(-b + disc) / qcomplex(2.0), (-b - disc) / qcomplex(2.0)})
      if (q_abs(root) < 1) out.push_back({root});
    return out;
  }
  bool boundary_evaluable() const override { return true; }
  json to_json() const override { return {{"type", "disk_blaschke_quad"}, {"a", a}}; }
};

// Cayley-conjugated half-plane translation w -> w + 1; parabolic automorphism
// fixing 1.  Closed form (1 + (2i-1) z) / ((1+2i) - z).
struct DiskParabolicNode : MapNode {
  int dim() const override { return 1; }
  std::string kind() const override { return "disk_parabolic"; }
  Point eval(const Point& z) const override {
    Complex i{0, 1};
    return point1((1.0 + (2.0 * i - 1.0) * z[0]) / ((1.0 + 2.0 * i) - z[0]));
  }
  CMat jacobian(const Point& z) const override {
    Complex i{0, 1};
    Complex d = (1.0 + 2.0 * i) - z[0];
    CMat J(1, 1);
    J(0, 0) = -4.0 / (d * d);
    return J;
  }
  bool has_closed_preimages() const override { return true; }
  std::vector<Point> closed_preimages(const Point& w) const override {
    Complex i{0, 1};
    return {point1(((1.0 + 2.0 * i) * w[0] - 1.0) / (w[0] + (2.0 * i - 1.0)))};
  }
  bool quad_capable() const override { return true; }
  QVec eval_q(const QVec& z) const override {
    qcomplex i{0, 1};
    qcomplex one(1.0);
    return {(one + (qcomplex(2.0) * i - one) * z[0]) / ((one + qcomplex(2.0) * i) - z[0])};
  }
  std::vector<QVec> closed_preimages_q(const QVec& w) const override {
    qcomplex i{0, 1};
    qcomplex one(1.0);
    return {{((one + qcomplex(2.0) * i) * w[0] - one) / (w[0] + (qcomplex(2.0) * i - one))}};
  }
  bool boundary_evaluable() const override { return true; }
  json to_json() const override { return {{"type", "disk_parabolic"}}; }
};

// (z1, z') -> ((z1+a)/(1+a z1), sqrt(1-a^2) z' / (1+a z1)), hyperbolic ball
// automorphism with axis e1.
struct BallMobiusAxisNode : MapNode {
  double a;
  int d;
  BallMobiusAxisNode(double a_, int d_) : a(a_), d(d_) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("ball_mobius_axis: a must lie in (0,1)");
    if (d < 1) throw ConfigError("ball_mobius_axis: dimension must be positive");
  }
  int dim() const override { return d; }
  std::string kind() const override { return "ball_mobius_axis"; }
  Point eval(const Point& z) const override {
    Complex den = 1.0 + a * z[0];
    Point out(d);
    out[0] = (z[0] + a) / den;
    double s = std::sqrt(1.0 - a * a);
    for (int i = 1; i < d; ++i) out[i] = s * z[i] / den;
    return out;
  }
  CMat jacobian(const Point& z) const override {
    Complex den = 1.0 + a * z[0];
    double s = std::sqrt(1.0 - a * a);
    CMat J = CMat::Zero(d, d);
    J(0, 0) = (1.0 - a * a) / (den * den);
    for (int i = 1; i < d; ++i) {
      J(i, 0) = -a * s * z[i] / (den * den);
      J(i, i) = s / den;
    }
    return J;
  }
  bool has_closed_preimages() const override { return true; }
  std::vector<Point> closed_preimages(const Point& w) const override {
    Complex den = 1.0 - a * w[0];
    Point out(d);
    out[0] = (w[0] - a) / den;
    double s = std::sqrt(1.0 - a * a);
    for (int i = 1; i < d; ++i) out[i] = s * w[i] / den;
    return {out};
  }
  bool quad_capable() const override { return true; }
  QVec eval_q(const QVec& z) const override {
    qcomplex qa(a);
    qcomplex den = qcomplex(1.0) + qa * z[0];
    QVec out(d);
    out[0] = (z[0] + qa) / den;
    qreal s = q_sqrt(qreal(1) - qreal(a) * qreal(a));
    for (int i = 1; i < d; ++i) out[i] = (s * z[i]) / den;
    return out;
  }
  std::vector<QVec> closed_preimages_q(const QVec& w) const override {
    qcomplex qa(a);
    qcomplex den = qcomplex(1.0) - qa * w[0];
    QVec out(d);
    out[0] = (w[0] - qa) / den;
    qreal s = q_sqrt(qreal(1) - qreal(a) * qreal(a));
    for (int i = 1; i < d; ++i) out[i] = (s * w[i]) / den;
    return {out};
  }
  bool boundary_evaluable() const override { return true; }
  json to_json() const override { return {{"type", "ball_mobius_axis"}, {"a", a}, {"dim", d}}; }
};

struct UnitaryNode : MapNode {
  CMat U, Uh;
  explicit UnitaryNode(CMat U_) : U(std::move(U_)) {
    if (U.rows() != U.cols()) throw ConfigError("unitary: matrix must be square");
    CMat err = U.adjoint() * U - CMat::Identity(U.rows(), U.cols());
    if (err.norm() > 1e-10) throw ConfigError("unitary: matrix is not unitary");
    Uh = U.adjoint();
  }
  int dim() const override { return static_cast<int>(U.rows()); }
  std::string kind() const override { return "unitary"; }
  Point eval(const Point& z) const override { return U * z; }
  CMat jacobian(const Point&) const override { return U; }
  bool has_closed_preimages() const override { return true; }
  std::vector<Point> closed_preimages(const Point& z) const override { return {Point(Uh * z)}; }
  bool quad_capable() const override { return true; }
  QVec eval_q(const QVec& z) const override { return matvec(U, z); }
  std::vector<QVec> closed_preimages_q(const QVec& z) const override { return {matvec(Uh, z)}; }
  bool boundary_evaluable() const override { return true; }
  static QVec matvec(const CMat& M, const QVec& z) {
    QVec out(M.rows(), qcomplex(0.0));
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      for (Eigen::Index c = 0; c < M.cols(); ++c)
        out[r] = out[r] + qcomplex(M(r, c)) * z[c];
    return out;
  }
  json to_json() const override;
};

struct ScaleNode : MapNode {
  Complex lambda;
  int d;
  ScaleNode(Complex l, int d_) : lambda(l), d(d_) {
    if (!(std::abs(l) < 1.0)) throw ConfigError("scale: |lambda| must be < 1");
  }
  int dim() const override { return d; }
  std::string kind() const override { return "scale"; }
  Point eval(const Point& z) const override { return lambda * z; }
  CMat jacobian(const Point&) const override {
    return lambda * CMat::Identity(d, d);
  }
  bool has_closed_preimages() const override { return true; }
  std::vector<Point> closed_preimages(const Point& z) const override {
    return {Point(z / lambda)};  // caller filters by membership
  }
  bool quad_capable() const override { return true; }
  QVec eval_q(const QVec& z) const override {
    QVec out(d);
    for (int i = 0; i < d; ++i) out[i] = qcomplex(lambda) * z[i];
    return out;
  }
  std::vector<QVec> closed_preimages_q(const QVec& z) const override {
    QVec out(d);
    for (int i = 0; i < d; ++i) out[i] = z[i] / qcomplex(lambda);
    return {out};
  }
  bool boundary_evaluable() const override { return true; }
  json to_json() const override {
    return {{"type", "scale"}, {"lambda", {lambda.real(), lambda.imag()}}};
  }
};

struct CompositionNode : MapNode {
  std::vector<std::shared_ptr<const MapNode>> parts;  // applied first to last
  explicit CompositionNode(std::vector<std::shared_ptr<const MapNode>> p) : parts(std::move(p)) {
    if (parts.empty()) throw ConfigError("compose: empty map list");
    for (const auto& q : parts)
      if (q->dim() != parts[0]->dim()) throw ConfigError("compose: dimension mismatch");
  }
  int dim() const override { return parts[0]->dim(); }
  std::string kind() const override { return "compose"; }
  Point eval(const Point& z) const override {
    Point x = z;
    for (const auto& p : parts) x = p->eval(x);
    return x;
  }
  CMat jacobian(const Point& z) const override {
    Point x = z;
    CMat J = CMat::Identity(dim(), dim());
    for (const auto& p : parts) {
      J = (p->jacobian(x) * J).eval();
      x = p->eval(x);
    }
    return J;
  }
  bool has_closed_preimages() const override {
    return std::all_of(parts.begin(), parts.end(),
                       [](const auto& p) { return p->has_closed_preimages(); });
  }
  std::vector<Point> closed_preimages(const Point& z) const override {
    std::vector<Point> frontier{z};
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      std::vector<Point> next;
      for (const Point& t : frontier)
        for (Point& w : (*it)->closed_preimages(t)) next.push_back(std::move(w));
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
    return frontier;
  }
  bool quad_capable() const override {
    return std::all_of(parts.begin(), parts.end(), [](const auto& p) { return p->quad_capable(); });
  }
  QVec eval_q(const QVec& z) const override {
    QVec x = z;
    for (const auto& p : parts) x = p->eval_q(x);
    return x;
  }
  std::vector<QVec> closed_preimages_q(const QVec& z) const override {
    std::vector<QVec> frontier{z};
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      std::vector<QVec> next;
      for (const QVec& t : frontier)
        for (QVec& w : (*it)->closed_preimages_q(t)) next.push_back(std::move(w));
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
    return frontier;
  }
  bool boundary_evaluable() const override {
    return std::all_of(parts.begin(), parts.end(),
                       [](const auto& p) { return p->boundary_evaluable(); });
  }
  json to_json() const override {
    json arr = json::array();
    for (const auto& p : parts) arr.push_back(p->to_json());
    return {{"type", "compose"}, {"maps", arr}};
  }
};

struct UserAnalyticNode : MapNode {
  std::function<Point(const Point&)> f;
  int d;
  std::string label;
  UserAnalyticNode(std::function<Point(const Point&)> f_, int d_, std::string label_)
      : f(std::move(f_)), d(d_), label(std::move(label_)) {}
  int dim() const override { return d; }
  std::string kind() const override { return "user_analytic"; }
  Point eval(const Point& z) const override { return f(z); }
  json to_json() const override { return {{"type", "user_analytic"}, {"label", label}}; }
};

json UnitaryNode::to_json() const {
  json rows = json::array();
  for (Eigen::Index r = 0; r < U.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < U.cols(); ++c)
      row.push_back({U(r, c).real(), U(r, c).imag()});
    rows.push_back(row);
  }
  return {{"type", "unitary"}, {"matrix", rows}};
}

}  // namespace

HolMap::HolMap(std::shared_ptr<const MapNode> node, Domain domain)
    : node_(std::move(node)), domain_(std::move(domain)) {
  if (node_->dim() != domain_.dim()) throw ConfigError("map/domain dimension mismatch");
}

Point HolMap::eval(const Point& z) const {
  if (!domain_.contains(z)) throw DomainError("eval: argument outside the domain");
  Point w = node_->eval(z);
  if (node_->kind() == "user_analytic" && !domain_.contains(w, -1e-14))
    throw SelfMapViolation("user map left the domain (rho = " + std::to_string(domain_.rho(w)) + ")");
  return w;
}

CMat HolMap::jacobian(const Point& z) const {
  if (!domain_.contains(z)) throw DomainError("jacobian: argument outside the domain");
  return node_->jacobian(z);
}

PreimageSet HolMap::preimages(const Point& z, const NewtonConfig& cfg) const {
  if (!domain_.contains(z)) throw DomainError("preimages: argument outside the domain");
  PreimageSet out;
  if (node_->has_closed_preimages()) {
    out.method = "closed_form";
    for (Point& w : node_->closed_preimages(z)) {
      if (!domain_.contains(w)) continue;
      double res = (node_->eval(w) - z).norm();
      out.solutions.push_back({std::move(w), res});
    }
  } else {
    out.method = "newton";
    std::vector<Point> seeds = cfg.extra_seeds;
    seeds.push_back(z);
    SplitRng rng(cfg.seed);
    for (int i = 0; i < cfg.random_seeds; ++i)
      seeds.push_back(domain_.center() + rng.in_ball(dim(), 0.95));
    for (const Point& s : seeds) {
      if (!domain_.contains(s)) continue;
      Point w = s;
      double res = (node_->eval(w) - z).norm();
      bool ok = false;
      for (int it = 0; it < cfg.max_iter; ++it) {
        CMat J = node_->jacobian(w);
        Point rhs = z - node_->eval(w);
        Point step = J.fullPivLu().solve(rhs);
        double t = 1.0;
        bool moved = false;
        for (int h = 0; h < cfg.max_halvings; ++h) {
          Point cand = w + t * step;
          if (domain_.contains(cand)) {
            double r2 = (node_->eval(cand) - z).norm();
            if (r2 < res) {
              w = cand;
              res = r2;
              moved = true;
              break;
            }
          }
          t *= 0.5;
        }
        if (res <= cfg.tol) { ok = true; break; }
        if (!moved) break;
      }
      if (ok && domain_.contains(w)) {
        bool dup = false;
        for (const auto& sol : out.solutions)
          if ((sol.point - w).norm() < cfg.dedup_eps) { dup = true; break; }
        if (!dup) out.solutions.push_back({w, res});
      }
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const PreimageSolution& a, const PreimageSolution& b) {
              for (Eigen::Index i = 0; i < a.point.size(); ++i) {
                if (a.point[i].real() != b.point[i].real()) return a.point[i].real() < b.point[i].real();
                if (a.point[i].imag() != b.point[i].imag()) return a.point[i].imag() < b.point[i].imag();
              }
              return false;
            });
  if (out.solutions.empty())
    throw NoPreimageError("no in-domain preimage found (" + out.method + ")");
  return out;
}

nlohmann::json HolMap::to_json() const { return node_->to_json(); }

HolMap HolMap::disk_mobius(double a) {
  return HolMap(std::make_shared<DiskMobiusNode>(a), Domain::disk());
}
HolMap HolMap::disk_blaschke_quad(double a) {
  return HolMap(std::make_shared<DiskBlaschkeQuadNode>(a), Domain::disk());
}
HolMap HolMap::disk_parabolic() {
  return HolMap(std::make_shared<DiskParabolicNode>(), Domain::disk());
}
HolMap HolMap::ball_mobius_axis(double a, int dim) {
  return HolMap(std::make_shared<BallMobiusAxisNode>(a, dim), Domain::ball(dim));
}
HolMap HolMap::unitary(const CMat& U) {
  auto node = std::make_shared<UnitaryNode>(U);
  return HolMap(node, Domain::ball(node->dim()));
}
HolMap HolMap::scale(Complex lambda, const Domain& D) {
  return HolMap(std::make_shared<ScaleNode>(lambda, D.dim()), D);
}
HolMap HolMap::compose(const std::vector<HolMap>& maps) {
  if (maps.empty()) throw ConfigError("compose: empty map list");
  std::vector<std::shared_ptr<const MapNode>> parts;
  for (const auto& m : maps) parts.push_back(m.node_);
  return HolMap(std::make_shared<CompositionNode>(std::move(parts)), maps[0].domain());
}
HolMap HolMap::identity(const Domain& D) {
  std::vector<std::shared_ptr<const MapNode>> parts;
  CMat I = CMat::Identity(D.dim(), D.dim());
  return HolMap(std::make_shared<UnitaryNode>(I), D);
}
HolMap HolMap::user_analytic(std::function<Point(const Point&)> f, Domain D, std::string label) {
  return HolMap(std::make_shared<UserAnalyticNode>(std::move(f), D.dim(), std::move(label)), std::move(D));
}

void validate_self_map(const HolMap& f, int samples) {
  const Domain& D = f.domain();
  for (int i = 0; i < samples; ++i) {
    Point z = D.center() + halton_in_ball(i, f.dim(), 0.999);
    if (!D.contains(z)) continue;
    Point w = f.node().eval(z);
    if (!D.contains(w, -1e-12))
      throw SelfMapViolation("self-map violation at sample " + std::to_string(i) +
                             " (rho(f(z)) = " + std::to_string(D.rho(w)) + ")");
  }
}

double jacobian_consistency(const HolMap& f, int samples, std::uint64_t seed) {
  SplitRng rng(seed);
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    Point z = f.domain().center() + rng.in_ball(f.dim(), 0.8);
    if (!f.domain().contains(z, 1e-3)) continue;
    CMat Ja = f.jacobian(z);
    CMat Jn = f.node().MapNode::jacobian(z);  // finite differences
    double rel = (Ja - Jn).norm() / std::max(1.0, Ja.norm());
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace kobdyn
