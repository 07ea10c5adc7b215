#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace kobdyn {

// Deterministic splittable generator (splitmix64 core).  Every sampling
// routine in the toolkit draws from one of these, created from a config
// seed, so reports are reproducible bit for bit.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::complex<double> in_disk(double radius = 1.0) {
    for (;;) {
      double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
      if (x * x + y * y < 1.0) return {radius * x, radius * y};
    }
  }

  // Uniform in the Euclidean ball of C^d (rejection from the cube).
  Eigen::VectorXcd in_ball(int dim, double radius = 1.0) {
    Eigen::VectorXcd z(dim);
    for (;;) {
      double n2 = 0;
      for (int i = 0; i < dim; ++i) {
        double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
        z[i] = {x, y};
        n2 += x * x + y * y;
      }
      if (n2 < 1.0) return radius * z;
    }
  }

  // Standard normal via Box-Muller (deterministic given the state).
  double gaussian() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Haar-ish direction on the unit sphere of C^d.
  Eigen::VectorXcd direction(int dim) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = {gaussian(), gaussian()};
    double n = v.norm();
    if (n < 1e-12) { v.setZero(); v[0] = 1.0; n = 1.0; }
    return v / n;
  }

  // Independent child stream.
  SplitRng split(std::uint64_t stream) const {
    SplitRng child(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL)));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
};

// Halton low-discrepancy sequence, for quasi-random sampled invariants.
inline double halton(std::uint64_t i, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  ++i;  // skip the origin
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// Quasi-random point in the ball of C^d (Halton lattice, rejection).
inline Eigen::VectorXcd halton_in_ball(std::uint64_t i, int dim, double radius = 1.0) {
  static const std::uint32_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  std::uint64_t idx = i;
  for (;;) {
    Eigen::VectorXcd z(dim);
    double n2 = 0;
    for (int c = 0; c < dim; ++c) {
      double x = 2.0 * halton(idx, primes[(2 * c) % 12]) - 1.0;
      double y = 2.0 * halton(idx, primes[(2 * c + 1) % 12]) - 1.0;
      z[c] = {x, y};
      n2 += x * x + y * y;
    }
    if (n2 < 1.0) return radius * z;
    idx += 7919;  // deterministic re-draw
  }
}

}  // namespace kobdyn
