#pragma once

// Log-domain helpers for evaluating entire functions at large radius without
// overflow. Exponents are carried in long double; accumulation is compensated.

#include <cmath>
#include <cstdint>
#include <limits>

namespace maclane {

inline long double log_factorial(long long n) {
  return lgammal((long double)n + 1.0L);
}

// log of the rescaled Taylor weight t_j(r) = e^{-r} r^j / j!.
inline long double log_taylor_weight(long long j, double r) {
  if (r <= 0.0) return j == 0 ? 0.0L : -std::numeric_limits<long double>::infinity();
  return (long double)j * logl((long double)r) - log_factorial(j) - (long double)r;
}

inline double taylor_weight(long long j, double r) {
  return (double)expl(log_taylor_weight(j, r));
}

// Neumaier-compensated accumulator.
struct NeumaierSum {
  long double s = 0.0L;
  long double c = 0.0L;
  void add(long double x) {
    long double t = s + x;
    if (fabsl(s) >= fabsl(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  long double value() const { return s + c; }
};

inline long double log_add(long double a, long double b) {
  if (a < b) { long double t = a; a = b; b = t; }
  if (b == -std::numeric_limits<long double>::infinity()) return a;
  return a + log1pl(expl(b - a));
}

// log of a certified bound on sum_{j>J} slope * j * t_j(r), valid for J >= 2r:
// the summand at least halves at each step (ratio r/j <= 1/2), so the tail is
// at most 2 * slope * (J+2) * t_{J+1}(r).
inline long double log_tail_bound(long long J, double r, double slope) {
  return logl(2.0L * (long double)slope * ((long double)J + 2.0L)) +
         log_taylor_weight(J + 1, r);
}

// Smallest truncation J >= max(2r, 16) + 64 whose tail bound is below
// tol * e^{-0} in the rescaled (e^{-r} f) scale.
inline long long choose_truncation(double r, double slope, double tol) {
  long long J = (long long)ceill(2.0L * (long double)(r > 0 ? r : 0)) + 64;
  if (J < 80) J = 80;
  const long double logtol = logl((long double)tol);
  while (log_tail_bound(J, r, slope) > logtol) {
    J += J / 8 + 32;
  }
  return J;
}

}  // namespace maclane
