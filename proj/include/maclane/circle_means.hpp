#pragma once

// Rescaled circle evaluation and certified integral means. All values are
// carried in the rescaled frame e^{-r} f(r e^{i theta}), whose Taylor
// weights t_j = e^{-r} r^j / j! peak near 1/sqrt(2 pi r); exponents are
// computed in long double so no intermediate overflows for any radius.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "coeff_poly.hpp"
#include "construction.hpp"
#include "fft.hpp"
#include "logdomain.hpp"

namespace maclane {

struct EvalOptions {
  double tail_tol = 1e-12;       // rescaled absolute tail target
  unsigned max_fft_log2 = 22;    // refuse single transforms above this
  std::size_t min_grid = 1024;
  std::size_t sup_factor = 16;   // grid points per degree for sup norms
  std::size_t oversample = 4;    // quadrature oversampling for non-even p
  double cluster_gap = 0.0;      // 0 = automatic
};

struct CircleSamples {
  std::vector<std::complex<double>> values;  // e^{-r} f(r e^{2 pi i j / N})
  long long J = 0;                           // truncation degree
  double tail = 0.0;                         // certified rescaled tail bound
};

namespace detail {

struct WeightedTerm {
  long long freq;
  std::complex<double> w;
};

// Rescaled nonzero terms w_s = a_s t_s(r) for s <= J.
inline std::vector<WeightedTerm> weighted_support(const CoeffSource& src,
                                                  double r, long long J) {
  std::vector<WeightedTerm> terms;
  for (long long s : src.support(0, J)) {
    RatC a = src.coeff(s);
    if (a.is_zero()) continue;
    const long double lw = log_taylor_weight(s, r);
    const double w = (double)expl(lw);
    if (w == 0.0) continue;
    std::complex<double> c = a.to_complex();
    terms.push_back({s, {c.real() * w, c.imag() * w}});
  }
  return terms;
}

}  // namespace detail

// Evaluate the rescaled function on N equispaced points. Uses one FFT when
// N is a power of two at least the truncation degree, otherwise a direct
// sparse sum with exact angle reduction.
inline CircleSamples eval_circle(const CoeffSource& src, double r,
                                 std::size_t N, const EvalOptions& opt = {}) {
  if (N == 0) throw std::invalid_argument("eval_circle: N must be positive");
  if (!(r > 0)) throw std::invalid_argument("eval_circle: r must be positive");
  CircleSamples out;
  out.J = choose_truncation(r, src.growth_slope(), opt.tail_tol);
  out.tail = (double)expl(log_tail_bound(out.J, r, src.growth_slope()));
  auto terms = detail::weighted_support(src, r, out.J);
  if (is_pow2(N) && out.J < (long long)N &&
      N <= ((std::size_t)1 << opt.max_fft_log2)) {
    std::vector<std::complex<double>> buf(N);
    for (const auto& t : terms) buf[(std::size_t)t.freq] += t.w;
    fft_pow2(buf, +1);
    out.values = std::move(buf);
    return out;
  }
  out.values.assign(N, {});
  const long double two_pi = 6.28318530717958647692528676655900577L;
  for (std::size_t j = 0; j < N; ++j) {
    std::complex<double> acc{};
    for (const auto& t : terms) {
      // exact reduction of s * j mod N keeps the angle small
      const unsigned long long k =
          (unsigned long long)((__int128)t.freq * (__int128)j % (__int128)N);
      const long double a = two_pi * (long double)k / (long double)N;
      const std::complex<double> w((double)cosl(a), (double)sinl(a));
      acc += t.w * w;
    }
    out.values[j] = acc;
  }
  return out;
}

// Certified integral mean M_{f,p}(r) e^{-r}, p in [1, inf].
struct PMean {
  double scaled = 0.0;  // best estimate
  double lo = 0.0;      // certified lower bound
  double hi = 0.0;      // certified upper bound
  long long J = 0;
  double tail = 0.0;
  std::size_t grid = 0;
  bool clustered = false;
};

namespace detail {

// Sup norm of sum w_s e^{i s theta} over a frequency window, demodulated to
// halve the Bernstein degree. Frequencies need not be contiguous.
inline NormEstimate window_sup(const std::vector<WeightedTerm>& terms,
                               std::size_t first, std::size_t count,
                               const EvalOptions& opt) {
  long long fmin = terms[first].freq, fmax = terms[first].freq;
  for (std::size_t i = first; i < first + count; ++i) {
    fmin = std::min(fmin, terms[i].freq);
    fmax = std::max(fmax, terms[i].freq);
  }
  const long long width = fmax - fmin + 1;
  std::vector<std::complex<double>> c((std::size_t)width);
  for (std::size_t i = first; i < first + count; ++i)
    c[(std::size_t)(terms[i].freq - fmin)] += terms[i].w;
  PNormOptions po;
  po.min_grid = opt.min_grid;
  po.sup_factor = opt.sup_factor;
  po.oversample = opt.oversample;
  po.max_fft_log2 = opt.max_fft_log2;
  return trig_pnorm(c, std::numeric_limits<double>::infinity(), po);
}

}  // namespace detail

inline PMean pmean(const CoeffSource& src, double p, double r,
                   const EvalOptions& opt = {}) {
  if (!(p >= 1.0)) throw std::invalid_argument("pmean: p must be in [1, inf]");
  if (!(r > 0)) throw std::invalid_argument("pmean: r must be positive");
  PMean out;
  const double slope = src.growth_slope();
  out.J = choose_truncation(r, slope, opt.tail_tol);
  out.tail = (double)expl(log_tail_bound(out.J, r, slope));
  auto terms = detail::weighted_support(src, r, out.J);
  if (terms.empty()) {
    out.hi = out.tail;
    return out;
  }
  long long fmin = terms.front().freq, fmax = terms.front().freq;
  for (const auto& t : terms) {
    fmin = std::min(fmin, t.freq);
    fmax = std::max(fmax, t.freq);
  }
  const long long W = fmax - fmin + 1;
  const std::size_t cap = (std::size_t)1 << opt.max_fft_log2;

  if (std::isinf(p)) {
    const std::size_t D = (std::size_t)((W - 1) / 2 + ((W - 1) % 2));
    const std::size_t need = std::max(opt.min_grid, opt.sup_factor * (D + 1));
    if (next_pow2(need) <= cap) {
      NormEstimate e = detail::window_sup(terms, 0, terms.size(), opt);
      out.scaled = e.value;
      out.lo = std::max(0.0, e.lo - out.tail);
      out.hi = e.hi + out.tail;
      out.grid = next_pow2(need);
      return out;
    }
    // Support too wide for one transform: split into clusters at large
    // frequency gaps, bound each cluster separately, and combine by the
    // triangle inequality.
    out.clustered = true;
    double gap = opt.cluster_gap;
    if (gap <= 0.0) gap = std::clamp(std::sqrt(r), 64.0, 4096.0);
    std::vector<std::pair<std::size_t, std::size_t>> clusters;  // (first, count)
    std::size_t start = 0;
    for (std::size_t i = 1; i <= terms.size(); ++i) {
      if (i == terms.size() ||
          (double)(terms[i].freq - terms[i - 1].freq) > gap) {
        clusters.push_back({start, i - start});
        start = i;
      }
    }
    std::vector<NormEstimate> est(clusters.size());
    double sum_hi = 0.0;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      est[ci] = detail::window_sup(terms, clusters[ci].first, clusters[ci].second, opt);
      sum_hi += est[ci].hi;
    }
    double best_lo = 0.0, best_val = 0.0;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      const double others = sum_hi - est[ci].hi;
      best_lo = std::max(best_lo, est[ci].lo - others);
      best_val = std::max(best_val, est[ci].value);
    }
    out.scaled = best_val;
    out.lo = std::max(0.0, best_lo - out.tail);
    out.hi = sum_hi + out.tail;
    return out;
  }

  // Finite p: quadrature sized for exact integration of |f|^p when p is an
  // even integer, oversampled otherwise, with a half-grid comparison.
  std::size_t need =
      2 * (std::size_t)(W > 1 ? W - 1 : 1) * (std::size_t)std::max(1.0, std::ceil(p)) + 1;
  if (!detail::is_even_integer(p)) need *= opt.oversample;
  need = std::max(need, opt.min_grid);
  const std::size_t N = next_pow2(need);
  if (N > cap)
    throw std::length_error("pmean: finite-p grid exceeds the FFT cap");
  std::vector<std::complex<double>> buf(N);
  for (const auto& t : terms)
    buf[(std::size_t)(t.freq - fmin)] += t.w;  // demodulation: moduli unchanged
  fft_pow2(buf, +1);
  const long double v = detail::sampled_p_mean(buf, 1, p);
  const long double vh = detail::sampled_p_mean(buf, 2, p);
  const long double err = fabsl(v - vh) + 1e-12L * fabsl(v);
  out.scaled = (double)v;
  out.lo = std::max(0.0, (double)(v - err) - out.tail);
  out.hi = (double)(v + err) + out.tail;
  out.grid = N;
  return out;
}

// log M_{f,p}(r) recovered from the rescaled mean.
inline double log_growth(const PMean& m, double r) {
  if (m.scaled <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(m.scaled) + r;
}

// Scaled mean of one Taylor block P_n f at radius r: the block is a short
// polynomial, so its mean is computed directly from demodulated weighted
// coefficients with no truncation error.
inline NormEstimate block_pmean(const CoeffSource& src, long long n, double p,
                                double r, const EvalOptions& opt = {}) {
  if (n < 0) throw std::invalid_argument("block_pmean: n must be >= 0");
  const long long lo = n * n, hi = (n + 1) * (n + 1) - 1;
  std::vector<std::complex<double>> c((std::size_t)(hi - lo + 1));
  bool any = false;
  for (long long s : src.support(lo, hi)) {
    RatC a = src.coeff(s);
    if (a.is_zero()) continue;
    const double w = (double)expl(log_taylor_weight(s, r));
    std::complex<double> z = a.to_complex();
    c[(std::size_t)(s - lo)] = {z.real() * w, z.imag() * w};
    any = true;
  }
  if (!any) return {0.0, 0.0, 0.0};
  PNormOptions po;
  po.min_grid = opt.min_grid;
  po.sup_factor = opt.sup_factor;
  po.oversample = opt.oversample;
  po.max_fft_log2 = opt.max_fft_log2;
  return trig_pnorm(c, p, po);
}

}  // namespace maclane
