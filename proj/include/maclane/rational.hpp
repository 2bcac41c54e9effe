#pragma once

// Exact rational and Gaussian-rational scalars used for Taylor coefficients,
// plus certified bounds on sums of coefficient moduli.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace maclane {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

// floor(sqrt(x)) for x >= 0.
inline Int isqrt_floor(const Int& x) {
  if (x < 0) throw std::invalid_argument("isqrt_floor: negative argument");
  return boost::multiprecision::sqrt(x);
}

inline bool is_perfect_square(const Int& x, Int& root) {
  if (x < 0) return false;
  root = isqrt_floor(x);
  return root * root == x;
}

// Exact square root of a nonnegative rational when it is rational.
inline bool rat_sqrt_exact(const Rat& x, Rat& root) {
  Int rn, rd;
  if (!is_perfect_square(rat_num(x), rn)) return false;
  if (!is_perfect_square(rat_den(x), rd)) return false;
  root = Rat(rn, rd);
  return true;
}

// Gaussian rational a + bi with exact arithmetic.
struct RatC {
  Rat re{0};
  Rat im{0};

  RatC() = default;
  RatC(Rat r) : re(std::move(r)) {}
  RatC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  RatC(long r) : re(r) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  Rat abs_sq() const { return re * re + im * im; }

  std::complex<double> to_complex() const {
    return {to_double(re), to_double(im)};
  }

  RatC operator-() const { return {-re, -im}; }
  RatC operator+(const RatC& o) const { return {re + o.re, im + o.im}; }
  RatC operator-(const RatC& o) const { return {re - o.re, im - o.im}; }
  RatC operator*(const RatC& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const RatC& o) const { return re == o.re && im == o.im; }
  bool operator!=(const RatC& o) const { return !(*this == o); }
};

// Lexicographic order on (re, im); used for deterministic enumeration.
inline bool ratc_less(const RatC& a, const RatC& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

// Height of a reduced fraction a/b is max(1, |a|, b).
inline Int rat_height(const Rat& x) {
  Int h = boost::multiprecision::abs(rat_num(x));
  Int d = rat_den(x);
  if (d > h) h = d;
  if (h < 1) h = 1;
  return h;
}

inline Int coeff_height(const RatC& z) {
  Int h = rat_height(z.re);
  Int hi = rat_height(z.im);
  return hi > h ? hi : h;
}

// Closed interval [lo, hi] of rationals bracketing a real value.
// exact means lo == hi equals the value.
struct RatInterval {
  Rat lo{0};
  Rat hi{0};
  bool exact = true;
};

// Bracket sqrt(x) for rational x >= 0 to within hi - lo <= x_scale / 2^bits.
inline RatInterval sqrt_bounds(const Rat& x, unsigned bits = 96) {
  if (x < 0) throw std::invalid_argument("sqrt_bounds: negative argument");
  RatInterval out;
  Rat exact;
  if (rat_sqrt_exact(x, exact)) {
    out.lo = out.hi = exact;
    return out;
  }
  // floor((2^bits) * sqrt(x)) via integer sqrt of scaled numerator.
  Int scale = Int(1) << bits;
  Int s2 = scale * scale;
  Int n = rat_num(x), d = rat_den(x);
  Int root = isqrt_floor(n * s2 / d);
  out.lo = Rat(root, scale);
  out.hi = Rat(root + 1, scale);
  out.exact = false;
  return out;
}

// Bracket sum of |c| over coefficients. The sum is rational iff every
// modulus is rational (moduli are square roots of rationals; a sum of such
// square roots is rational only when each term is).
inline RatInterval l1_modulus_bounds(const std::vector<RatC>& coeffs,
                                     unsigned bits = 96) {
  RatInterval total;
  for (const RatC& c : coeffs) {
    if (c.is_zero()) continue;
    if (c.im == 0) {
      Rat a = boost::multiprecision::abs(c.re);
      total.lo += a;
      total.hi += a;
      continue;
    }
    if (c.re == 0) {
      Rat a = boost::multiprecision::abs(c.im);
      total.lo += a;
      total.hi += a;
      continue;
    }
    RatInterval s = sqrt_bounds(c.abs_sq(), bits);
    total.lo += s.lo;
    total.hi += s.hi;
    total.exact = total.exact && s.exact;
  }
  return total;
}

// Decide sum of |c| <= bound exactly. Refines brackets until the strict
// irrational case resolves; terminates because an inexact sum is irrational.
inline bool l1_at_most(const std::vector<RatC>& coeffs, const Rat& bound) {
  for (unsigned bits = 96;; bits *= 2) {
    RatInterval s = l1_modulus_bounds(coeffs, bits);
    if (s.exact) return s.lo <= bound;
    if (s.hi <= bound) return true;
    if (s.lo > bound) return false;
    if (bits > 1u << 14) throw std::runtime_error("l1_at_most: no resolution");
  }
}

// Smallest integer >= max(1, sum of |c|).
inline Int l1_ceil_min_radius(const std::vector<RatC>& coeffs) {
  RatInterval s = l1_modulus_bounds(coeffs);
  Int lo = rat_num(s.lo) / rat_den(s.lo);  // floor for nonnegative values
  if (lo < 1) lo = 1;
  while (!l1_at_most(coeffs, Rat(lo))) ++lo;
  return lo;
}

}  // namespace maclane
