#pragma once

#include <cstdint>
#include <vector>

#include "kobdyn/domain.hpp"
#include "kobdyn/types.hpp"

namespace kobdyn {

struct LempertConfig {
  int degree = 6;             // polynomial truncation degree N
  int boundary_samples = 64;  // containment samples on |zeta| = 1
  double margin = 1e-6;       // required clearance rho(phi(e^{i t})) <= -margin
  int max_evals = 4000;       // derivative-free refinement budget
  std::uint64_t seed = 1;     // direction shuffling of the compass search
  double eta_tol = 1e-12;     // final eta bisection tolerance
};

struct LempertResult {
  double value = 0;            // k_Delta(zeta0, eta) of the best feasible disk
  double feasibility_gap = 0;  // max(0, worst containment violation)
  bool fallback = false;       // no feasible disk beyond the affine line section
  double eta = 0;              // second interpolation parameter (w = phi(eta))
  int degree = 0;
  std::vector<Point> coeffs;   // c_0..c_N of phi(zeta) = sum c_j zeta^j
};

// Upper bound on the Kobayashi distance of a convex domain via polynomial
// disks phi(zeta) = c_0 + c_1 zeta + ... + c_N zeta^N interpolating
// phi(zeta0) = z and phi(eta) = w, containment enforced on sampled boundary
// circles; the value is the Poincare distance of the parameter pair.  The
// affine member is the extremal reparametrization of the complex-line
// section, so quadratic-gauge domains are handled exactly up to the margin.
LempertResult lempert_numeric(const Domain& D, const Point& z, const Point& w,
                              const LempertConfig& cfg = {});

}  // namespace kobdyn
