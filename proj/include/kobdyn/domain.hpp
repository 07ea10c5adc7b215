#pragma once

#include <functional>
#include <memory>

#include "kobdyn/types.hpp"

namespace kobdyn {

enum class DomainKind { UnitDisk, UnitBall, LinearImage, General };

// User-supplied convex domain described by a defining function rho < 0.
// `grad` returns the complex vector g with d rho(z)[v] = 2 Re<v, g(z)>.
struct GeneralSpec {
  int dim = 1;
  std::function<double(const Point&)> rho;
  std::function<Point(const Point&)> grad;
  Point interior_point;
  double convexity_radius = 0.0;  // lower bound on boundary curvature radii, informational
};

// Bounded convex domain descriptor with membership, defining-function and
// boundary-distance queries.  Immutable and cheap to copy.
class Domain {
 public:
  Domain() = default;  // the unit disk
  static Domain disk();
  static Domain ball(int dim);
  static Domain linear_image(const CMat& T);  // T invertible; D = T(B^d)
  static Domain general(GeneralSpec spec);

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }

  // rho < 0 inside, = 0 on the boundary.  Closed forms use |.|^2 - 1 gauges.
  double rho(const Point& z) const;
  Point rho_grad(const Point& z) const;

  bool contains(const Point& z, double margin = 0.0) const;

  // Euclidean distance to the boundary (0 on the boundary itself).
  double boundary_dist(const Point& z) const;

  // Nearest boundary point (closed form for disk/ball, secular equation for
  // ellipsoids, normal-ray iteration for general domains).
  Point project_boundary(const Point& z) const;

  Point inward_normal(const Point& boundary_pt) const;

  // Canonical interior base point (the origin for the closed-form kinds).
  Point center() const;

  // Validates or projects p onto the boundary and wraps it.
  BoundaryPoint boundary_point(const Point& p) const;

  const CMat& T() const;
  const CMat& T_inv() const;
  const GeneralSpec& general_spec() const;

  bool closed_form() const { return kind_ != DomainKind::General; }

 private:
  DomainKind kind_ = DomainKind::UnitDisk;
  int dim_ = 1;
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Sampled second-difference convexity probe for user-supplied defining
// functions.  Heuristic: returns the worst (most negative) curvature proxy
// seen along random boundary chords; a strongly convex rho stays positive.
double sampled_convexity_margin(const Domain& d, int samples, std::uint64_t seed);

}  // namespace kobdyn
