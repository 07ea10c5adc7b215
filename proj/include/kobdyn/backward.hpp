#pragma once

#include <optional>

#include "kobdyn/dynamics.hpp"
#include "kobdyn/holomap.hpp"
#include "kobdyn/orbit.hpp"
#include "kobdyn/report.hpp"

namespace kobdyn {

enum class BranchPolicy { MinStep, TowardSigma };

struct BackwardConfig {
  double a_max = 2.0;               // admissible Kobayashi step bound
  BranchPolicy policy = BranchPolicy::MinStep;
  std::optional<Point> toward;      // boundary target for TowardSigma
  NewtonConfig newton;
  double boundary_tol = 1e-6;       // limit-candidate acceptance on boundary_dist
  double increment_tol = 1e-8;      // and on consecutive increments
  bool use_quad = true;             // quad-precision stepping when the map supports it
};

// One backward step: picks an admissible preimage by the configured policy.
Point backward_step(const HolMap& f, const Point& z, const BackwardConfig& cfg);

// Backward orbit z_0 = z0, f(z_{n+1}) = z_n, with steps, residuals and a
// boundary limit candidate.  Stops early (flagged) on bounded-step failure.
OrbitRecord backward_orbit(const HolMap& f, const Point& z0, int n, const BackwardConfig& cfg);

// Fills t_n / s_n / gauge diagnostic sequences for an existing orbit.
void attach_diagnostics(OrbitRecord& orbit, const HolMap& f, const Classification& cls,
                        const Point& pole);

// Ball around a repelling boundary fixed point whose closure excludes the
// Wolff point and every catalogued boundary fixed point with dilation at
// most beta_cap.
struct IsolationWindow {
  BoundaryPoint center;
  double radius = 0.5;
  double beta_cap = 1.0;
};

IsolationWindow default_window(const HolMap& f, const BoundaryPoint& sigma, double beta_sigma,
                               const std::vector<std::pair<BoundaryPoint, double>>& catalogued = {});

struct ConstructConfig {
  int family = 18;            // number of seed points r_k on the geodesic
  double cluster_eps = 1e-4;  // proximity clustering tolerance
  int stable_run = 3;         // consecutive indices required for stabilization
  double slack = 0.05;        // allowance over (1/2) log beta on the step bound
  int seg_samples = 33;       // discretization of the segments gamma_k
  double extend_target = 1e-5;  // ||z - sigma|| goal of the backward extension
  int max_len = 2000;
  int max_forward = 20000;
  double window_margin = 0.9;  // horospheres must fit in 90% of the window
  std::optional<Point> pole;
};

// Backward orbit with Kobayashi step bounded by (1/2) log beta_sigma + slack
// converging to an isolated repelling boundary fixed point: seeds r_k on
// horosphere boundaries shrinking inside the window, first-exit forward
// tracking of the segments [r_k, f(r_k)], proximity clustering of the exit
// family, chain extraction and a toward-sigma backward extension.
OrbitRecord construct_backward_orbit_at(const HolMap& f, const BoundaryPoint& sigma,
                                        const IsolationWindow& window,
                                        const ConstructConfig& cfg = {});

// Radial limit of k_D(phi(t), f(phi(t))) against (1/2)|log beta_sigma|.
VerdictReport step_limit_check(const HolMap& f, const BoundaryPoint& sigma, const Point& pole,
                               double tol = 1e-3);

// A boundary limit with limsup step (1/2) log alpha is a boundary fixed
// point with dilation coefficient at most alpha.
VerdictReport limsup_step_fixedpoint_check(const HolMap& f, const OrbitRecord& orbit);

// Items (i)-(iv) of the backward-convergence theorem on a recorded orbit.
VerdictReport theorem01_suite(const HolMap& f, const OrbitRecord& orbit, const Point& pole);

// Per-step inequalities: horofunction growth t_{n+1} >= t_n / beta_tau,
// contraction decay s_{n+1} <= c s_n, and the boundary-distance Cauchy bound.
VerdictReport inequality_battery(const HolMap& f, const OrbitRecord& orbit, const Point& pole);

}  // namespace kobdyn
