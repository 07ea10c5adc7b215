#pragma once

#include <limits>
#include <optional>
#include <variant>

#include <nlohmann/json.hpp>

#include "kobdyn/holomap.hpp"
#include "kobdyn/orbit.hpp"
#include "kobdyn/report.hpp"

namespace kobdyn {

struct IterateConfig {
  int max_iter = 200000;
  double interior_increment_tol = 1e-13;
  double boundary_dist_tol = 1e-6;
  double boundary_increment_tol = 1e-9;
  double classification_margin = 1e-3;  // hyperbolic vs parabolic split on beta
  double newton_tol = 1e-12;
  std::uint64_t seed = 11;
};

struct DilationConfig {
  int k_min = 4;
  int k_max = 26;  // radial samples t = 1 - 2^-k
};

// Radial estimate of the dilation coefficient beta_{sigma,p}.
struct DilationEstimate {
  double value = 1.0;
  bool infinite = false;
  Point pole;
  double error_bar = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t, bracket)
  nlohmann::json to_json() const;
};

DilationEstimate dilation_coefficient(const HolMap& f, const BoundaryPoint& sigma,
                                      const Point& pole, const DilationConfig& cfg = {});

enum class MapClass { StronglyElliptic, EllipticNonStrong, Hyperbolic, Parabolic };
std::string to_string(MapClass k);

struct Classification {
  MapClass kind = MapClass::StronglyElliptic;
  std::optional<Point> fixed_point;      // strongly elliptic Wolff point
  std::optional<BoundaryPoint> wolff;    // boundary Wolff point
  std::optional<DilationEstimate> beta;  // beta_tau for the boundary cases
  double spectral_radius = std::numeric_limits<double>::quiet_NaN();
  nlohmann::json evidence;

  bool fixed_point_free() const {
    return kind == MapClass::Hyperbolic || kind == MapClass::Parabolic;
  }
  nlohmann::json to_json() const;
};

Classification classify(const HolMap& f, const IterateConfig& cfg = {});

// Forward orbit with per-step Kobayashi distances.
OrbitRecord iterate_forward(const HolMap& f, const Point& z0, int n);

// Interior fixed point (strongly elliptic) or boundary orbit limit.
std::variant<Point, BoundaryPoint> wolff_point(const HolMap& f, const IterateConfig& cfg = {});

struct BoundaryFixedPointResult {
  bool fixed = false;
  DilationEstimate beta;
  VerdictReport detail;  // per approach curve verdicts
};

// K-limit test along a fan of approach curves inside K-regions of
// amplitudes log M in {1, 2, 4}.
BoundaryFixedPointResult is_boundary_fixed_point(const HolMap& f, const BoundaryPoint& sigma,
                                                 const IterateConfig& cfg = {});

// Sampled horosphere inclusion f(E_p(sigma,R)) in E_p(tau, beta R).
VerdictReport julia_check(const HolMap& f, const BoundaryPoint& sigma, const BoundaryPoint& tau,
                          const Point& pole, int trials, std::uint64_t seed);

// Cross-checks the three Wolff-point characterizations for fixed-point-free maps.
VerdictReport wolff_consistency(const HolMap& f, const IterateConfig& cfg = {});

struct ContractionEstimate {
  double c = 1.0;     // exp(2 sup)
  double sup = 0.0;   // sup of k(f(z),p) - k(z,p) over the sampled region
  bool contradiction = false;
  Point witness;
  nlohmann::json to_json() const;
};

// Empirical contraction constant of a strongly elliptic map outside the
// Kobayashi ball of radius R0 around its fixed point.
ContractionEstimate contraction_constant(const HolMap& f, const Point& p, double R0, int samples,
                                         std::uint64_t seed,
                                         const std::vector<Point>* extra = nullptr);

// Newton polish of a boundary fixed point on the unit circle (d = 1 maps
// with continuous boundary extension); returns the polished point.
BoundaryPoint polish_boundary_fixed_point(const HolMap& f, const BoundaryPoint& guess);

}  // namespace kobdyn
