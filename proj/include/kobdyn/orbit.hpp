#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kobdyn/quad.hpp"
#include "kobdyn/types.hpp"

namespace kobdyn {

enum class OrbitDirection { Forward, Backward };

// Quad-precision shadow of an orbit, kept alive for near-boundary
// diagnostics (steps and horofunction values degrade in double once the
// orbit is within ~1e-16 of the boundary).
struct QuadTrace {
  std::vector<QVec> points;
};

struct OrbitRecord {
  OrbitDirection direction = OrbitDirection::Forward;
  std::vector<Point> points;        // z_0 .. z_n
  std::vector<double> steps;        // k_D(z_{i+1}, z_i)
  std::vector<double> residuals;    // backward: ||f(z_{i+1}) - z_i||
  std::vector<double> t_seq;        // h_{tau,p}(z_i) (hyperbolic/parabolic diagnostics)
  std::vector<double> s_seq;        // exp(-2 k_D(p, z_i)) (strongly elliptic diagnostics)
  std::vector<double> gauges;       // K-region gauge toward the boundary limit
  double step_sup = 0;              // a = sup steps
  bool distance_capped = false;     // a near-boundary distance hit the overflow guard
  bool converged_boundary = false;
  std::optional<Point> boundary_limit;  // sigma estimate, projected to the boundary
  bool truncated = false;           // stopped before the requested length
  std::string note;
  std::shared_ptr<const QuadTrace> quad;

  std::size_t length() const { return points.size(); }

  double step_limsup_tail(std::size_t tail = 8) const {
    double m = 0;
    std::size_t from = steps.size() > tail ? steps.size() - tail : 0;
    for (std::size_t i = from; i < steps.size(); ++i) m = std::max(m, steps[i]);
    return m;
  }
};

}  // namespace kobdyn
