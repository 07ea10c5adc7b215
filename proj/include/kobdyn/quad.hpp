#pragma once

// Extended-precision scalar used for near-boundary orbit bookkeeping.
// Backward orbits of hyperbolic-type maps approach the boundary like
// beta^-n, which drops below double rounding after ~35 steps; steps and
// horofunction values along such tails are computed in quad precision.

#include <complex>
#include <cstdint>
#include <vector>

#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__) && !defined(__clang__)
#define KOBDYN_HAVE_QUAD 1
#include <quadmath.h>
#else
#define KOBDYN_HAVE_QUAD 0
#include <cmath>
#endif

namespace kobdyn {

#if KOBDYN_HAVE_QUAD
using qreal = __float128;
inline qreal q_sqrt(qreal x) { return sqrtq(x); }
inline qreal q_log(qreal x) { return logq(x); }
inline qreal q_atanh(qreal x) { return atanhq(x); }
inline qreal q_fabs(qreal x) { return fabsq(x); }
inline qreal q_hypot(qreal x, qreal y) { return hypotq(x, y); }
#else
using qreal = long double;
inline qreal q_sqrt(qreal x) { return std::sqrt(x); }
inline qreal q_log(qreal x) { return std::log(x); }
inline qreal q_atanh(qreal x) { return std::atanh(x); }
inline qreal q_fabs(qreal x) { return std::fabs(x); }
inline qreal q_hypot(qreal x, qreal y) { return std::hypot(x, y); }
#endif

struct qcomplex {
  qreal re{0}, im{0};
  qcomplex() = default;
  qcomplex(qreal r, qreal i) : re(r), im(i) {}
  qcomplex(double r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  qcomplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT
};

inline qcomplex operator+(qcomplex a, qcomplex b) { return {a.re + b.re, a.im + b.im}; }
inline qcomplex operator-(qcomplex a, qcomplex b) { return {a.re - b.re, a.im - b.im}; }
inline qcomplex operator-(qcomplex a) { return {-a.re, -a.im}; }
inline qcomplex operator*(qcomplex a, qcomplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline qcomplex operator*(qreal s, qcomplex a) { return {s * a.re, s * a.im}; }
inline qcomplex q_conj(qcomplex a) { return {a.re, -a.im}; }
inline qreal q_abs2(qcomplex a) { return a.re * a.re + a.im * a.im; }
inline qreal q_abs(qcomplex a) { return q_hypot(a.re, a.im); }
inline qcomplex operator/(qcomplex a, qcomplex b) {
  qreal d = q_abs2(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline qcomplex q_sqrt(qcomplex a) {
  // principal branch
  qreal m = q_abs(a);
  qreal u = q_sqrt((m + a.re) / 2);
  qreal v = q_sqrt((m - a.re) / 2);
  if (a.im < 0) v = -v;
  return {u, v};
}

inline std::complex<double> to_std(qcomplex a) {
  return {static_cast<double>(a.re), static_cast<double>(a.im)};
}
inline double to_double(qreal x) { return static_cast<double>(x); }

using QVec = std::vector<qcomplex>;

inline QVec to_qvec(const std::complex<double>* data, int n) {
  QVec v(n);
  for (int i = 0; i < n; ++i) v[i] = qcomplex(data[i]);
  return v;
}

inline qreal q_norm2(const QVec& v) {
  qreal s = 0;
  for (const auto& c : v) s += q_abs2(c);
  return s;
}
inline qreal q_norm(const QVec& v) { return q_sqrt(q_norm2(v)); }

// <z,w> = sum z_i conj(w_i)
inline qcomplex q_hermitian(const QVec& z, const QVec& w) {
  qcomplex s{0, 0};
  for (std::size_t i = 0; i < z.size(); ++i) s = s + z[i] * q_conj(w[i]);
  return s;
}

inline QVec q_sub(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Poincare distance on the unit disk, 1/2-log normalization.
inline qreal q_poincare_dist(qcomplex z, qcomplex w) {
  qcomplex num = z - w;
  qcomplex den = qcomplex(1.0) - z * q_conj(w);
  qreal m = q_abs(num) / q_abs(den);
  return q_atanh(m);
}

// Kobayashi distance of the unit ball (Bergman distance), same normalization.
inline qreal q_ball_dist(const QVec& z, const QVec& w) {
  qreal nz = q_norm2(z), nw = q_norm2(w);
  qcomplex ip = qcomplex(1.0) - q_hermitian(z, w);
  qreal s = (1 - nz) * (1 - nw) / q_abs2(ip);
  if (s > 1) s = 1;
  qreal m = q_sqrt(1 - s);
  return q_atanh(m);
}

// Horofunction of the ball with pole at the origin.
inline qreal q_ball_horofunction0(const QVec& tau, const QVec& z) {
  qcomplex ip = qcomplex(1.0) - q_hermitian(z, tau);
  return q_abs2(ip) / (1 - q_norm2(z));
}

}  // namespace kobdyn
