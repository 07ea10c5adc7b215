#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kobdyn/domain.hpp"
#include "kobdyn/errors.hpp"
#include "kobdyn/geodesic.hpp"
#include "kobdyn/horosphere.hpp"
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
  spec.convexity_radius = 1.0;
  return Domain::general(spec);
}

Domain half_ellipsoid() {
  CMat T = CMat::Zero(2, 2);
  T(0, 0) = 1.0;
  T(1, 1) = 1.0 / std::sqrt(2.0);
  return Domain::linear_image(T);
}

}  // namespace

TEST_CASE("poincare distance closed forms") {
  CHECK(poincare_dist(0.0, 0.0) == 0.0);
  // k(0, r) = atanh r = (1/2) log((1+r)/(1-r))
  CHECK(poincare_dist(0.0, 0.5) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
  CHECK(poincare_dist(Complex(0.3, 0.2), Complex(0.3, 0.2)) == 0.0);
}

TEST_CASE("poincare distance is Mobius invariant") {
  auto g = [](Complex z) { return (z + 0.2) / (1.0 + 0.2 * z); };
  double base = poincare_dist(0.0, 0.5);
  CHECK(std::abs(poincare_dist(g(0.0), g(0.5)) - base) < 1e-14);
  SplitRng rng(42);
  for (int i = 0; i < 50; ++i) {
    Complex z = rng.in_disk(0.95), w = rng.in_disk(0.95);
    CHECK(std::abs(poincare_dist(g(z), g(w)) - poincare_dist(z, w)) < 1e-12);
  }
}

TEST_CASE("poincare domain errors") {
  CHECK_THROWS_AS(poincare_dist(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(poincare_dist(0.0, Complex(0.8, 0.7)), DomainError);
}

TEST_CASE("metric axioms on sampled triples") {
  SplitRng rng(7);
  for (int i = 0; i < 200; ++i) {
    Complex a = rng.in_disk(0.9), b = rng.in_disk(0.9), c = rng.in_disk(0.9);
    double ab = poincare_dist(a, b), ba = poincare_dist(b, a);
    CHECK(ab == ba);  // symmetry is exact
    CHECK(poincare_dist(a, c) <= ab + poincare_dist(b, c) + 1e-12);
  }
}

TEST_CASE("ball distance restricts to the Poincare distance") {
  CHECK(ball_dist(point2(0, 0), point2(0, 0)) == 0.0);
  CHECK(ball_dist(point2(0, 0), point2(0.5, 0)) ==
        doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
  SplitRng rng(3);
  for (int i = 0; i < 50; ++i) {
    Complex z = rng.in_disk(0.9), w = rng.in_disk(0.9);
    CHECK(ball_dist(point2(z, 0), point2(w, 0)) ==
          doctest::Approx(poincare_dist(z, w)).epsilon(1e-13));
  }
}

TEST_CASE("ball distance is unitary invariant") {
  CMat U(2, 2);
  double s = std::sqrt(0.5);
  U << Complex(s, 0), Complex(0, s), Complex(0, s), Complex(s, 0);
  SplitRng rng(9);
  for (int i = 0; i < 50; ++i) {
    Point z = rng.in_ball(2, 0.9), w = rng.in_ball(2, 0.9);
    CHECK(ball_dist(U * z, U * w) == doctest::Approx(ball_dist(z, w)).epsilon(1e-12));
  }
}

TEST_CASE("distance dispatch and biholomorphic invariance") {
  Domain E = half_ellipsoid();
  SplitRng rng(11);
  for (int i = 0; i < 30; ++i) {
    Point z = rng.in_ball(2, 0.9), w = rng.in_ball(2, 0.9);
    Point tz = E.T() * z, tw = E.T() * w;
    CHECK(distance(E, tz, tw) == doctest::Approx(ball_dist(z, w)).epsilon(1e-12));
    CHECK(distance(E, tz, tz) == 0.0);
  }
  Domain disk = Domain::disk();
  CHECK(distance(disk, point1(0.1), point1(0.6)) ==
        doctest::Approx(poincare_dist(0.1, 0.6)).epsilon(1e-15));
  CHECK_THROWS_AS(distance(disk, point1(0.1), point1(1.2)), DomainError);
}

TEST_CASE("distance blows up toward the boundary") {
  Domain B = Domain::ball(2);
  Point p = Point::Zero(2);
  double prev = 0;
  for (double r : {0.9, 0.99, 0.999, 0.9999}) {
    double d = distance(B, p, point2(r, 0));
    CHECK(d > prev);
    prev = d;
  }
  CHECK(prev > 4.0);
}

TEST_CASE("boundary distance") {
  CHECK(Domain::disk().boundary_dist(point1(0)) == doctest::Approx(1.0));
  CHECK(Domain::ball(2).boundary_dist(point2(0.6, 0)) == doctest::Approx(0.4).epsilon(1e-14));
  Domain E = half_ellipsoid();
  CHECK(E.boundary_dist(Point::Zero(2)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  // projection consistency: the projected point is on the boundary
  SplitRng rng(13);
  for (int i = 0; i < 20; ++i) {
    Point z = E.T() * rng.in_ball(2, 0.95);
    Point q = E.project_boundary(z);
    CHECK(std::abs(E.rho(q)) < 1e-9);
    CHECK(E.boundary_dist(z) <= (q - z).norm() + 1e-12);
  }
}

TEST_CASE("general domain boundary distance matches the wrapped ball") {
  Domain G = wrapped_ball(2);
  SplitRng rng(17);
  for (int i = 0; i < 10; ++i) {
    Point z = rng.in_ball(2, 0.9);
    CHECK(G.boundary_dist(z) == doctest::Approx(1.0 - z.norm()).epsilon(1e-8));
  }
  CHECK(sampled_convexity_margin(G, 32, 5) > 0.0);
}

TEST_CASE("geodesic through the origin of the disk") {
  Domain disk = Domain::disk();
  Geodesic g = geodesic_through(disk, point1(0), disk.boundary_point(point1(1)));
  CHECK((g.eval(0.0) - point1(0)).norm() < 1e-15);
  CHECK((g.eval(0.5) - point1(0.5)).norm() < 1e-14);
  CHECK((g.eval(1.0) - point1(1)).norm() < 1e-12);
  CHECK((g.eval(-1.0) - point1(-1)).norm() < 1e-12);  // the diameter hits both ends
}

TEST_CASE("ball geodesic through 0 and (0.5,0)") {
  Domain B = Domain::ball(2);
  Geodesic g = geodesic_through(B, Point(Point::Zero(2)), point2(0.5, 0));
  CHECK(g.target_param == doctest::Approx(0.5).epsilon(1e-13));
  CHECK((g.eval(g.target_param) - point2(0.5, 0)).norm() < 1e-13);
  CHECK(std::abs(g.left_inverse(point2(0.3, 0)) - Complex(0.3)) < 1e-13);
}

TEST_CASE("geodesic left inverse and isometry property") {
  Domain B = Domain::ball(2);
  SplitRng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Point z = rng.in_ball(2, 0.8), w = rng.in_ball(2, 0.8);
    if ((z - w).norm() < 1e-3) continue;
    Geodesic g = geodesic_through(B, z, w);
    CHECK((g.eval(0.0) - z).norm() < 1e-13);
    CHECK((g.eval(g.target_param) - w).norm() < 1e-12);
    for (int i = 0; i < 8; ++i) {
      Complex zeta = rng.in_disk(0.95);
      CHECK(std::abs(g.left_inverse(g.eval(zeta)) - zeta) < 1e-10);
      Complex eta = rng.in_disk(0.95);
      CHECK(std::abs(ball_dist(g.eval(zeta), g.eval(eta)) - poincare_dist(zeta, eta)) < 1e-9);
      // retraction is idempotent on the image
      CHECK((g.retraction(g.eval(zeta)) - g.eval(zeta)).norm() < 1e-10);
    }
  }
}

TEST_CASE("geodesics are unsupported on general domains") {
  Domain G = wrapped_ball(2);
  CHECK_THROWS_AS(geodesic_through(G, Point(Point::Zero(2)), point2(0.5, 0)),
                  UnsupportedOperation);
}

TEST_CASE("horofunction closed forms") {
  Domain disk = Domain::disk();
  BoundaryPoint tau = disk.boundary_point(point1(1));
  Point p = point1(0);
  CHECK(horofunction(disk, tau, p, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(horofunction(disk, tau, p, point1(0.5)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("pole change identity") {
  Domain B = Domain::ball(2);
  BoundaryPoint tau = B.boundary_point(point2(1, 0));
  SplitRng rng(29);
  for (int i = 0; i < 30; ++i) {
    Point p = rng.in_ball(2, 0.7), q = rng.in_ball(2, 0.7), z = rng.in_ball(2, 0.9);
    double lhs = horofunction(B, tau, q, z) * horofunction(B, tau, p, q);
    double rhs = horofunction(B, tau, p, z);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("horofunction blows up away from its center") {
  Domain disk = Domain::disk();
  BoundaryPoint tau = disk.boundary_point(point1(1));
  Point p = point1(0);
  double prev = 0;
  for (double r : {0.9, 0.99, 0.999}) {
    double h = horofunction(disk, tau, p, point1(-r));  // approaching -1 != tau
    CHECK(h > prev);
    prev = h;
  }
  CHECK(prev > 100.0);
}

TEST_CASE("horofunction defining-limit estimate agrees with the closed form") {
  Domain B = Domain::ball(2);
  BoundaryPoint tau = B.boundary_point(point2(1, 0));
  Point p = Point::Zero(2);
  Point z = point2(Complex(0.3, 0.1), Complex(-0.2, 0.25));
  auto est = horofunction_limit_estimate(B, tau, p, z, 18);
  double exact = horofunction(B, tau, p, z);
  CHECK(std::abs(est.value - exact) < 1e-6);
  CHECK(std::abs(est.value - exact) <= est.error + 1e-6);
}

TEST_CASE("K-region gauge") {
  Domain disk = Domain::disk();
  BoundaryPoint tau = disk.boundary_point(point1(1));
  Point p = point1(0);
  CHECK(kregion_gauge(disk, tau, p, p) == 0.0);
  for (double r : {0.1, 0.5, 0.9, 0.99})
    CHECK(std::abs(kregion_gauge(disk, tau, p, point1(r))) < 1e-12);  // the radius cancels
}

TEST_CASE("gauge pole comparability") {
  Domain B = Domain::ball(2);
  BoundaryPoint tau = B.boundary_point(point2(1, 0));
  SplitRng rng(31);
  for (int i = 0; i < 20; ++i) {
    Point p = rng.in_ball(2, 0.6), q = rng.in_ball(2, 0.6), z = rng.in_ball(2, 0.9);
    double gp = kregion_gauge(B, tau, p, z), gq = kregion_gauge(B, tau, q, z);
    double L = distance(B, p, q) + std::abs(0.5 * std::log(horofunction(B, tau, p, q)));
    CHECK(std::abs(gq - gp) <= L + 1e-9);
  }
}

TEST_CASE("general-domain horofunction estimate is within its error bar") {
  Domain G = wrapped_ball(2);
  Domain B = Domain::ball(2);
  BoundaryPoint tau = G.boundary_point(point2(1, 0));
  Point p = Point::Zero(2);
  Point z = point2(0.25, 0.1);
  auto est = horofunction_limit_estimate(G, tau, p, z, 10);
  double exact = horofunction(B, B.boundary_point(point2(1, 0)), p, z);
  CHECK(std::abs(est.value - exact) < 5e-3);
}
