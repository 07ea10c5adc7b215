#pragma once

#include "kobdyn/domain.hpp"
#include "kobdyn/lempert.hpp"
#include "kobdyn/types.hpp"

namespace kobdyn {

// Poincare distance on the unit disk in the 1/2-log normalization:
// k(0, r) = atanh r.  Throws DomainError off the open disk.
double poincare_dist(Complex z, Complex w);

// Kobayashi (= Bergman) distance of the unit ball, same normalization.
double ball_dist(const Point& z, const Point& w);

// Kobayashi distance of D: closed form for disk/ball, pullback through
// T^-1 for linear images, certified upper bound via lempert_numeric for
// general convex domains.
double distance(const Domain& D, const Point& z, const Point& w);
double distance(const Domain& D, const Point& z, const Point& w, const LempertConfig& cfg);

}  // namespace kobdyn
