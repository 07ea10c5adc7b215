#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace kobdyn {

struct Extrapolation {
  double value = 0;
  double error = 0;      // estimated residual error of `value`
  bool converged = true; // false when the raw sequence oscillates or diverges
  bool diverging = false;
};

// Richardson extrapolation of g_k = L + c1 r^k + c2 r^{2k} + ..., sampled at
// consecutive k.  `ratio` is r (0 < r < 1).
inline Extrapolation richardson(const std::vector<double>& g, double ratio, int max_levels = 4) {
  Extrapolation out;
  const std::size_t n = g.size();
  if (n == 0) { out.converged = false; return out; }
  if (n == 1) { out.value = g[0]; out.error = std::abs(g[0]); out.converged = false; return out; }

  // Detect monotone divergence of the raw sequence.
  {
    std::size_t m = n;
    double d1 = g[m - 1] - g[m - 2];
    double d2 = (m >= 3) ? g[m - 2] - g[m - 3] : 0.0;
    if (m >= 3 && std::abs(d1) > 2.0 * std::abs(d2) && std::abs(d1) > 1.0) {
      out.diverging = true;
      out.converged = false;
      out.value = g[m - 1];
      out.error = std::abs(d1);
      return out;
    }
  }

  std::vector<double> row = g;
  double prev_tail = g[n - 1];
  double err = std::abs(g[n - 1] - g[n - 2]);
  int levels = std::min<int>(max_levels, static_cast<int>(n) - 1);
  double rpow = ratio;
  for (int j = 1; j <= levels; ++j) {
    std::vector<double> next(row.size() - 1);
    for (std::size_t k = 0; k + 1 < row.size(); ++k)
      next[k] = (row[k + 1] - rpow * row[k]) / (1.0 - rpow);
    double tail = next.back();
    double delta = std::abs(tail - prev_tail);
    if (j == levels || (next.size() >= 2 && delta < 1e-18)) {
      err = (next.size() >= 2) ? std::max(std::abs(tail - next[next.size() - 2]), delta * 0.5)
                               : delta;
    }
    prev_tail = tail;
    row = std::move(next);
    rpow *= ratio;
  }
  out.value = row.back();
  out.error = std::max(err, 1e-18);

  // Oscillation check on the raw increments.
  int sign_flips = 0;
  double last = 0;
  bool growing = false;
  for (std::size_t k = 1; k < n; ++k) {
    double d = g[k] - g[k - 1];
    if (k >= 2 && d * last < 0) ++sign_flips;
    if (k + 2 >= n && std::abs(d) > std::abs(last) && std::abs(d) > 1e-12) growing = true;
    last = d;
  }
  if (sign_flips >= static_cast<int>(n) / 2 && growing) out.converged = false;
  return out;
}

// Bisection for the smallest t in [lo, hi] with pred(t) true, assuming pred
// is false at lo and true at hi (monotone transition).
template <typename Pred>
double bisect_lowest_true(Pred pred, double lo, double hi, double tol, int max_iter = 200) {
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (pred(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace kobdyn
