#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kobdyn/domain.hpp"
#include "kobdyn/quad.hpp"
#include "kobdyn/types.hpp"

namespace kobdyn {

struct NewtonConfig {
  double tol = 1e-12;        // residual ||f(w) - z||
  int max_iter = 80;
  int max_halvings = 30;     // damping on residual increase
  int random_seeds = 8;
  std::uint64_t seed = 7;
  double dedup_eps = 1e-8;
  std::vector<Point> extra_seeds;
};

struct PreimageSolution {
  Point point;
  double residual;
};

struct PreimageSet {
  std::vector<PreimageSolution> solutions;
  std::string method;  // "closed_form" or "newton"
};

// One node of a holomorphic-map expression tree.  Immutable.
class MapNode {
 public:
  virtual ~MapNode() = default;
  virtual int dim() const = 0;
  virtual std::string kind() const = 0;
  virtual Point eval(const Point& z) const = 0;
  virtual CMat jacobian(const Point& z) const;  // default: central differences
  virtual bool has_closed_preimages() const { return false; }
  virtual std::vector<Point> closed_preimages(const Point& z) const { return {}; }
  virtual bool quad_capable() const { return false; }
  virtual QVec eval_q(const QVec& z) const;
  virtual std::vector<QVec> closed_preimages_q(const QVec& z) const;
  // true when the map extends continuously to the closed domain
  virtual bool boundary_evaluable() const { return false; }
  virtual nlohmann::json to_json() const = 0;
};

// Evaluable holomorphic self-map of a domain, built from primitives.
class HolMap {
 public:
  HolMap(std::shared_ptr<const MapNode> node, Domain domain);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  const MapNode& node() const { return *node_; }

  Point eval(const Point& z) const;
  CMat jacobian(const Point& z) const;
  PreimageSet preimages(const Point& z, const NewtonConfig& cfg = {}) const;

  bool quad_capable() const { return node_->quad_capable() && domain_.closed_form(); }
  QVec eval_q(const QVec& z) const { return node_->eval_q(z); }
  std::vector<QVec> preimages_q(const QVec& z) const { return node_->closed_preimages_q(z); }
  bool boundary_evaluable() const { return node_->boundary_evaluable(); }

  nlohmann::json to_json() const;

  // primitive families
  static HolMap disk_mobius(double a);
  static HolMap disk_blaschke_quad(double a);
  static HolMap disk_parabolic();
  static HolMap ball_mobius_axis(double a, int dim);
  static HolMap unitary(const CMat& U);
  static HolMap scale(Complex lambda, const Domain& D);
  static HolMap compose(const std::vector<HolMap>& maps);  // applied left to right
  static HolMap identity(const Domain& D);
  static HolMap user_analytic(std::function<Point(const Point&)> f, Domain D,
                              std::string label = "user_analytic");

 private:
  std::shared_ptr<const MapNode> node_;
  Domain domain_;
};

// Sampled self-map check on quasi-random interior points; throws
// SelfMapViolation with a witness when an image escapes.
void validate_self_map(const HolMap& f, int samples = 1000);

// Worst relative deviation between the chain-rule Jacobian and central
// finite differences over sampled points (consistency diagnostic).
double jacobian_consistency(const HolMap& f, int samples, std::uint64_t seed);

}  // namespace kobdyn
