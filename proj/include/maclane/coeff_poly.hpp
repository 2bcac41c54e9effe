#pragma once

// Flat kernel polynomials (Golay-Rudin-Shapiro and de la Vallee-Poussin
// families) with exact rational coefficients, plus certified p-norm
// estimates for trigonometric polynomials on the unit circle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "logdomain.hpp"
#include "rational.hpp"

namespace maclane {

// Laurent-style coefficient vector: coeffs[i] multiplies e^{i(lo+i)theta}
// on the circle (equivalently z^{lo+i} when lo >= 0).
struct CoeffPoly {
  long long lo = 0;
  std::vector<RatC> coeffs;

  long long hi() const { return lo + (long long)coeffs.size() - 1; }
  bool empty() const { return coeffs.empty(); }

  RatC at_degree(long long d) const {
    if (d < lo || d > hi()) return RatC{};
    return coeffs[(std::size_t)(d - lo)];
  }
};

// Golay-Rudin-Shapiro signs s_0..s_{m-1}: s_0 = +1, s_{2n} = s_n,
// s_{2n+1} = (-1)^n s_n.
inline std::vector<int> rudin_shapiro_signs(std::size_t m) {
  if (m == 0) throw std::invalid_argument("rudin_shapiro_signs: m must be >= 1");
  std::vector<int> s(m);
  s[0] = 1;
  for (std::size_t n = 1; n < m; ++n) {
    if (n % 2 == 0) {
      s[n] = s[n / 2];
    } else {
      std::size_t h = n / 2;
      s[n] = (h % 2 == 0) ? s[h] : -s[h];
    }
  }
  return s;
}

// Negate all signs when +1 is in the minority, so at least ceil(m/2)
// coefficients equal +1. Sup and p-norms are unchanged.
inline std::vector<int> majority_adjusted(std::vector<int> s) {
  std::size_t plus = 0;
  for (int v : s) plus += (v == 1);
  if (2 * plus < s.size()) {
    for (int& v : s) v = -v;
  }
  return s;
}

inline CoeffPoly rudin_shapiro_poly(std::size_t m) {
  std::vector<int> s = majority_adjusted(rudin_shapiro_signs(m));
  CoeffPoly q;
  q.lo = 0;
  q.coeffs.reserve(m);
  for (int v : s) q.coeffs.push_back(RatC(Rat(v)));
  return q;
}

// Fejer kernel F_k, frequencies -(k-1)..(k-1), coefficient 1 - |j|/k.
inline CoeffPoly fejer_kernel(std::size_t k) {
  if (k == 0) throw std::invalid_argument("fejer_kernel: k must be >= 1");
  CoeffPoly f;
  f.lo = -((long long)k - 1);
  f.coeffs.resize(2 * k - 1);
  for (long long j = -(long long)k + 1; j <= (long long)k - 1; ++j) {
    f.coeffs[(std::size_t)(j + (long long)k - 1)] =
        RatC(Rat(1) - Rat(j < 0 ? -j : j, (long long)k));
  }
  return f;
}

// de la Vallee-Poussin block kernel: with k = floor(m/4) >= 1, the modulated
// kernel e^{2ik theta} (2 F_{2k} - F_k), an analytic polynomial supported on
// degrees 1..4k-1 whose 2k+1 central coefficients equal exactly 1.
// For m < 4 the kernel degenerates to the constant 1.
inline CoeffPoly vallee_poussin_poly(std::size_t m) {
  if (m == 0) throw std::invalid_argument("vallee_poussin_poly: m must be >= 1");
  const long long k = (long long)(m / 4);
  CoeffPoly q;
  if (k == 0) {
    q.lo = 0;
    q.coeffs = {RatC(Rat(1))};
    return q;
  }
  q.lo = 1;
  q.coeffs.resize((std::size_t)(4 * k - 1));
  for (long long j = -(2 * k - 1); j <= 2 * k - 1; ++j) {
    long long aj = j < 0 ? -j : j;
    Rat c = 2 * (Rat(1) - Rat(aj, 2 * k));
    if (aj < k) c -= Rat(1) - Rat(aj, k);
    q.coeffs[(std::size_t)(j + 2 * k - 1)] = RatC(c);
  }
  return q;
}

inline std::size_t plus_one_count(const CoeffPoly& q) {
  std::size_t n = 0;
  for (const RatC& c : q.coeffs) n += (c == RatC(Rat(1)));
  return n;
}

// Exact squared L2 norm on the circle (Parseval).
inline Rat parseval_norm_sq(const CoeffPoly& q) {
  Rat s = 0;
  for (const RatC& c : q.coeffs) s += c.abs_sq();
  return s;
}

struct NormEstimate {
  double value = 0.0;  // best estimate
  double lo = 0.0;     // certified lower bound
  double hi = 0.0;     // certified upper bound
};

struct PNormOptions {
  std::size_t min_grid = 4096;     // power of two
  std::size_t sup_factor = 16;     // grid points per degree for sup norms
  std::size_t oversample = 4;      // extra factor when quadrature is inexact
  unsigned max_fft_log2 = 22;      // refuse larger transforms
};

namespace detail {

inline bool is_even_integer(double p) {
  double r = std::round(p);
  return std::abs(p - r) == 0.0 && (long long)r % 2 == 0;
}

// |s|^p with cheap paths for the common exponents.
inline long double pow_abs(const std::complex<double>& s, double p) {
  const long double a2 = (long double)s.real() * s.real() +
                         (long double)s.imag() * s.imag();
  if (p == 2.0) return a2;
  const long double a = sqrtl(a2);
  if (p == 1.0) return a;
  if (p == 1.5) return a * sqrtl(a);
  if (p == 4.0) return a2 * a2;
  if (a == 0.0L) return 0.0L;
  return expl((long double)p * logl(a));
}

// Mean of |s|^p over the first n samples taken with stride, then ^(1/p).
inline long double sampled_p_mean(const std::vector<std::complex<double>>& s,
                                  std::size_t stride, double p) {
  NeumaierSum acc;
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); i += stride, ++n) acc.add(pow_abs(s[i], p));
  long double mean = acc.value() / (long double)n;
  if (mean <= 0.0L) return 0.0L;
  return expl(logl(mean) / (long double)p);
}

}  // namespace detail

// Certified p-norm (p in [1, inf]) of the trig polynomial with the given
// coefficient vector; the absolute frequency offset does not affect any
// norm, so only the vector matters. Sup norms use a Bernstein grid bound
// M <= M_N / (1 - d pi / N); finite p uses quadrature sized for exactness
// on even integer p and oversampled plus Richardson-compared otherwise.
inline NormEstimate trig_pnorm(const std::vector<std::complex<double>>& coeffs,
                               double p, const PNormOptions& opt = {}) {
  if (!(p >= 1.0))
    throw std::invalid_argument("trig_pnorm: p must be in [1, inf]");
  // Trim zeros and center so the effective degree is halved.
  std::size_t first = 0, last = coeffs.size();
  while (first < last && coeffs[first] == std::complex<double>{}) ++first;
  while (last > first && coeffs[last - 1] == std::complex<double>{}) --last;
  if (first == last) return {0.0, 0.0, 0.0};
  const std::size_t W = last - first;
  const std::size_t D = (W - 1) / 2 + ((W - 1) % 2);  // ceil((W-1)/2)

  const bool inf_norm = std::isinf(p);
  std::size_t need;
  if (inf_norm) {
    need = std::max(opt.min_grid, opt.sup_factor * (D + 1));
  } else {
    need = 2 * (W > 1 ? W - 1 : 1) * (std::size_t)std::max(1.0, std::ceil(p)) + 1;
    if (!detail::is_even_integer(p)) need *= opt.oversample;
    need = std::max(need, opt.min_grid);
  }
  const std::size_t N = next_pow2(need);
  if (N > (std::size_t)1 << opt.max_fft_log2)
    throw std::length_error("trig_pnorm: required grid exceeds FFT cap");

  std::vector<std::complex<double>> buf(N);
  const std::size_t center = (W - 1) / 2;
  for (std::size_t i = 0; i < W; ++i) {
    // frequency i - center, reduced mod N
    std::size_t idx = (i >= center) ? (i - center) : (N - (center - i));
    buf[idx] += coeffs[first + i];
  }
  fft_pow2(buf, +1);

  NormEstimate out;
  if (inf_norm) {
    long double mx2 = 0.0L;
    for (const auto& s : buf) {
      long double a2 = (long double)s.real() * s.real() +
                       (long double)s.imag() * s.imag();
      if (a2 > mx2) mx2 = a2;
    }
    const double mx = (double)sqrtl(mx2);
    const double frac = (double)D * 3.14159265358979323846 / (double)N;
    if (frac >= 0.5) throw std::length_error("trig_pnorm: grid too coarse for certificate");
    out.value = mx;
    out.lo = mx * (1.0 - 1e-12);
    out.hi = mx / (1.0 - frac) * (1.0 + 1e-12);
  } else {
    const long double v = detail::sampled_p_mean(buf, 1, p);
    const long double vh = detail::sampled_p_mean(buf, 2, p);
    const long double err = fabsl(v - vh) + 1e-12L * fabsl(v);
    out.value = (double)v;
    out.lo = (double)(v - err);
    out.hi = (double)(v + err);
    if (out.lo < 0.0) out.lo = 0.0;
  }
  return out;
}

inline std::vector<std::complex<double>> to_complex_coeffs(const CoeffPoly& q) {
  std::vector<std::complex<double>> c;
  c.reserve(q.coeffs.size());
  for (const RatC& z : q.coeffs) c.push_back(z.to_complex());
  return c;
}

inline NormEstimate poly_pnorm(const CoeffPoly& q, double p,
                               const PNormOptions& opt = {}) {
  if (q.empty()) throw std::invalid_argument("poly_pnorm: empty polynomial");
  return trig_pnorm(to_complex_coeffs(q), p, opt);
}

// Shared-sample variant: one transform serves several exponents.
inline std::vector<NormEstimate> trig_pnorm_multi(
    const std::vector<std::complex<double>>& coeffs,
    const std::vector<double>& ps, const PNormOptions& opt = {}) {
  PNormOptions merged = opt;
  std::size_t grid = opt.min_grid;
  for (double p : ps) {
    if (!(p >= 1.0)) throw std::invalid_argument("trig_pnorm_multi: bad p");
    std::size_t W = coeffs.size();
    std::size_t need;
    if (std::isinf(p)) {
      need = opt.sup_factor * ((W - 1) / 2 + 2);
    } else {
      need = 2 * (W > 1 ? W - 1 : 1) * (std::size_t)std::max(1.0, std::ceil(p)) + 1;
      if (!detail::is_even_integer(p)) need *= opt.oversample;
    }
    grid = std::max(grid, need);
  }
  merged.min_grid = next_pow2(grid);
  std::vector<NormEstimate> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(trig_pnorm(coeffs, p, merged));
  return out;
}

// Certified sup norms of every Rudin-Shapiro prefix p_1..p_{m_max} on one
// fixed grid, built incrementally: prefix sums differ by a single rotated
// sign, so the whole family costs O(m_max * N). Sign adjustment does not
// change moduli, so the raw recursion signs are used.
struct SupScan {
  std::vector<double> sampled;    // grid maxima (lower bounds)
  std::vector<double> certified;  // Bernstein-inflated upper bounds
};

inline SupScan rudin_shapiro_sup_scan(std::size_t m_max,
                                      unsigned grid_log2 = 17) {
  if (m_max == 0) throw std::invalid_argument("rudin_shapiro_sup_scan: m_max >= 1");
  const std::size_t N = (std::size_t)1 << grid_log2;
  const double pi = 3.14159265358979323846;
  if ((double)(m_max - 1) * pi / (double)N > 0.25)
    throw std::length_error("rudin_shapiro_sup_scan: grid too coarse");

  std::vector<int> s = rudin_shapiro_signs(m_max);
  std::vector<std::complex<double>> table(N);
  for (std::size_t j = 0; j < N; ++j) {
    long double a = 2.0L * 3.14159265358979323846264338327950288L *
                    (long double)j / (long double)N;
    table[j] = {(double)cosl(a), (double)sinl(a)};
  }
  // Real coefficients: |p(e^{-i t})| = |p(e^{i t})|, so scan half the circle.
  const std::size_t H = N / 2;
  std::vector<std::complex<double>> acc(H + 1);
  SupScan out;
  out.sampled.resize(m_max);
  out.certified.resize(m_max);
  const std::size_t mask = N - 1;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const std::size_t deg = m - 1;
    const double sign = (double)s[deg];
    long double mx2 = 0.0L;
    for (std::size_t j = 0; j <= H; ++j) {
      const std::complex<double>& w = table[(deg * j) & mask];
      std::complex<double>& a = acc[j];
      a = {a.real() + sign * w.real(), a.imag() + sign * w.imag()};
      const long double n2 = (long double)a.real() * a.real() +
                             (long double)a.imag() * a.imag();
      if (n2 > mx2) mx2 = n2;
    }
    const double mx = (double)sqrtl(mx2);
    out.sampled[m - 1] = mx;
    out.certified[m - 1] = mx / (1.0 - (double)deg * pi / (double)N) + 1e-9;
  }
  return out;
}

}  // namespace maclane
