#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kobdyn/domain.hpp"
#include "kobdyn/errors.hpp"
#include "kobdyn/lempert.hpp"
#include "kobdyn/metric.hpp"
#include "kobdyn/rng.hpp"

using namespace kobdyn;

namespace {

Domain wrapped_ball(int d) {
  GeneralSpec spec;
  spec.dim = d;
  spec.rho = [](const Point& z) { return z.squaredNorm() - 1.0; };
  spec.grad = [](const Point& z) { return z; };
  spec.interior_point = Point::Zero(d);
  return Domain::general(spec);
}

}  // namespace

TEST_CASE("affine disk is exact for centered disk pairs at degree 0") {
  Domain disk = Domain::disk();
  LempertConfig cfg;
  cfg.degree = 0;
  LempertResult r = lempert_numeric(disk, point1(0), point1(0.4), cfg);
  CHECK(r.fallback == false);
  CHECK(r.value == doctest::Approx(std::atanh(0.4)).epsilon(1e-5));
  CHECK(r.value >= std::atanh(0.4) - 1e-9);
  CHECK(r.feasibility_gap <= 1e-6);
}

TEST_CASE("ball pairs agree with the closed form at degree 6") {
  Domain B = Domain::ball(2);
  SplitRng rng(101);
  LempertConfig cfg;
  cfg.degree = 6;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    Point z = rng.in_ball(2), w = rng.in_ball(2);
    if ((z - w).norm() < 1e-3) continue;
    double oracle = ball_dist(z, w);
    LempertResult r = lempert_numeric(B, z, w, cfg);
    CHECK(r.value >= oracle - 1e-9);  // certified upper bound
    CHECK(r.feasibility_gap <= 1e-6);
    worst = std::max(worst, r.value - oracle);
  }
  MESSAGE("worst ball error: ", worst);
  CHECK(worst <= 1e-3);
}

TEST_CASE("ellipsoid linear image matches the pullback oracle") {
  CMat T = CMat::Zero(2, 2);
  T(0, 0) = 1.0;
  T(1, 1) = 1.0 / std::sqrt(2.0);
  Domain E = Domain::linear_image(T);
  SplitRng rng(202);
  LempertConfig cfg;
  cfg.degree = 6;
  double worst = 0;
  for (int i = 0; i < 6; ++i) {
    Point z = E.T() * rng.in_ball(2), w = E.T() * rng.in_ball(2);
    if ((z - w).norm() < 1e-3) continue;
    double oracle = ball_dist(E.T_inv() * z, E.T_inv() * w);
    LempertResult r = lempert_numeric(E, z, w, cfg);
    CHECK(r.value >= oracle - 1e-9);
    worst = std::max(worst, r.value - oracle);
  }
  MESSAGE("worst ellipsoid error: ", worst);
  CHECK(worst <= 1e-3);
}

TEST_CASE("general wrapped ball works through the sampled section") {
  Domain G = wrapped_ball(2);
  SplitRng rng(303);
  LempertConfig cfg;
  cfg.degree = 5;
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    Point z = rng.in_ball(2, 0.85), w = rng.in_ball(2, 0.85);
    if ((z - w).norm() < 1e-3) continue;
    double oracle = ball_dist(z, w);
    LempertResult r = lempert_numeric(G, z, w, cfg);
    CHECK(r.value >= oracle - 1e-6);
    worst = std::max(worst, r.value - oracle);
  }
  MESSAGE("worst general-domain error: ", worst);
  CHECK(worst <= 5e-3);
}

TEST_CASE("near-boundary pair accuracy (horofunction workload)") {
  Domain B = Domain::ball(2);
  Point z = point2(Complex(0.3, 0.1), Complex(-0.2, 0.25));
  LempertConfig cfg;
  cfg.degree = 6;
  double worst = 0;
  for (int k = 3; k <= 10; ++k) {
    Point w = point2(1.0 - std::ldexp(1.0, -k), 0.0);
    double oracle = ball_dist(z, w);
    LempertResult r = lempert_numeric(B, z, w, cfg);
    worst = std::max(worst, std::abs(r.value - oracle));
  }
  MESSAGE("worst near-boundary error: ", worst);
  CHECK(worst < 2e-3);
}

TEST_CASE("degenerate inputs are rejected") {
  Domain B = Domain::ball(2);
  CHECK_THROWS_AS(lempert_numeric(B, point2(0.1, 0), point2(0.1, 0)), DomainError);
  CHECK_THROWS_AS(lempert_numeric(B, point2(1.1, 0), point2(0, 0)), DomainError);
}
