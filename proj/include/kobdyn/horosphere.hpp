#pragma once

#include "kobdyn/domain.hpp"
#include "kobdyn/types.hpp"

namespace kobdyn {

// Horofunction h_{tau,p}(z) = exp(2 lim_{w->tau} [k_D(z,w) - k_D(p,w)]).
// Closed form on disk/ball/linear images; sequence extrapolation along the
// segment from p to tau on general domains (error reported via the
// *_estimate variant, EstimationError on oscillation).
double horofunction(const Domain& D, const BoundaryPoint& tau, const Point& pole, const Point& z);

struct HorofunctionEstimate {
  double value = 0;   // h estimate
  double error = 0;   // error bar on log-scale propagated to h
  int samples = 0;
};

// Defining-limit route, usable on every domain kind (independent of the
// closed forms; this is what general domains dispatch to).
HorofunctionEstimate horofunction_limit_estimate(const Domain& D, const BoundaryPoint& tau,
                                                 const Point& pole, const Point& z,
                                                 int k_max = 14, double tol = 1e-6);

// K-region gauge (1/2) log h_{tau,p}(z) + k_D(p,z); z lies in K_p(tau,M)
// exactly when the gauge is below log M.
double kregion_gauge(const Domain& D, const BoundaryPoint& tau, const Point& pole, const Point& z);

}  // namespace kobdyn
