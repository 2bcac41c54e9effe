#pragma once

// Numerical verification of the standalone inequalities used by the growth
// argument: factorial multiplier tables against their Gaussian profile, the
// wrapped heat kernel normalization, the peak-block sum bound, the
// log-chord gap bound, and the two Stirling-type estimates.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "logdomain.hpp"

namespace maclane {

// lambda[k]  = prod_{i=1..k} n^2 / (n^2 + i),          k = 0..2n,
// lambda'[k] = prod_{i=0..k-1} ((n+1)^2 - i) / (n+1)^2, k = 1..2n+1.
// Both track exp(-k^2 / 2n^2) within 12/n.
struct MultiplierTable {
  long long n = 0;
  std::vector<double> lambda;        // index k, size 2n+1
  std::vector<double> lambda_prime;  // index k-1, size 2n+1
  double max_dev = 0.0;              // worst |value - gauss(k)|
  bool within_bound = false;         // max_dev <= 12/n
};

inline MultiplierTable lambda_table(long long n) {
  if (n < 1) throw std::invalid_argument("lambda_table: n must be >= 1");
  MultiplierTable t;
  t.n = n;
  const long double n2 = (long double)n * n;
  const long double m2 = (long double)(n + 1) * (n + 1);
  t.lambda.resize((std::size_t)(2 * n + 1));
  t.lambda_prime.resize((std::size_t)(2 * n + 1));
  long double prod = 1.0L;
  for (long long k = 0; k <= 2 * n; ++k) {
    if (k > 0) prod *= n2 / (n2 + (long double)k);
    t.lambda[(std::size_t)k] = (double)prod;
    const long double dev = fabsl(prod - expl(-(long double)k * k / (2.0L * n2)));
    if ((double)dev > t.max_dev) t.max_dev = (double)dev;
  }
  prod = 1.0L;
  for (long long k = 1; k <= 2 * n + 1; ++k) {
    prod *= (m2 - (long double)(k - 1)) / m2;
    t.lambda_prime[(std::size_t)(k - 1)] = (double)prod;
    const long double dev = fabsl(prod - expl(-(long double)k * k / (2.0L * n2)));
    if ((double)dev > t.max_dev) t.max_dev = (double)dev;
  }
  t.within_bound = t.max_dev <= 12.0 / (double)n;
  return t;
}

// Wrapped Gaussian g(theta) = sum_l sqrt(2 pi) n exp(-n^2 (theta - 2 pi l)^2 / 2)
// sampled on a uniform grid; its mean against the normalized measure
// d(theta) / 2 pi must be 1 within quadrature error, and g > 0.
struct HeatKernelCheck {
  long long n = 0;
  std::size_t grid = 0;
  double mass = 0.0;
  double min_value = 0.0;   // may round to 0: the true minimum is ~e^{-n^2 pi^2 / 2}
  double peak = 0.0;        // g(0)
  bool positive = false;    // min over the grid is > 0, tested in long double
};

inline HeatKernelCheck heat_kernel_mass(long long n, std::size_t grid = 0) {
  if (n < 1) throw std::invalid_argument("heat_kernel_mass: n must be >= 1");
  HeatKernelCheck out;
  out.n = n;
  if (grid == 0) grid = (std::size_t)(8 * n + 64);
  out.grid = grid;
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double sq = sqrtl(2.0L * pi) * (long double)n;
  // wrap until the added term is below 1e-25 at every grid point
  long long wrap = 1 + (long long)(7.6L / (2.0L * pi * (long double)n));
  if (wrap < 2) wrap = 2;
  NeumaierSum mass;
  long double mn = 1e300L, pk = 0.0L;
  for (std::size_t j = 0; j < grid; ++j) {
    const long double th = 2.0L * pi * (long double)j / (long double)grid;
    NeumaierSum g;
    for (long long l = -wrap; l <= wrap; ++l) {
      const long double d = th - 2.0L * pi * (long double)l;
      g.add(sq * expl(-(long double)n * n * d * d / 2.0L));
    }
    const long double gv = g.value();
    mass.add(gv);
    if (gv < mn) mn = gv;
    if (j == 0) pk = gv;
  }
  out.mass = (double)(mass.value() / (long double)grid);
  out.min_value = (double)mn;
  out.peak = (double)pk;
  out.positive = mn > 0.0L;
  return out;
}

// ratio of sum_{n=1..infty} e^{n^2} (m/n)^{2n^2} n^{-2a} to its claimed
// bound 10 e^{m^2} m^{-2a}, for integer m >= 1 and a >= 0. The series is
// summed in the log domain; terms beyond m + 50 are covered by a certified
// geometric tail.
struct PeakSumResult {
  double ratio = 0.0;
  double tail_log = 0.0;  // log of the neglected-tail bound
  bool pass = false;      // ratio <= 1
};

inline PeakSumResult peak_sum_ratio(long long m, double a) {
  if (m < 1) throw std::invalid_argument("peak_sum_ratio: m must be >= 1");
  if (a < 0) throw std::invalid_argument("peak_sum_ratio: a must be >= 0");
  const long double lm = logl((long double)m);
  auto term_log = [&](long long n) {
    const long double ln = logl((long double)n);
    return (long double)n * n + 2.0L * (long double)n * n * (lm - ln) -
           2.0L * (long double)a * ln;
  };
  const long long N = m + 50;
  long double mx = -1e30L;
  for (long long n = 1; n <= N; ++n) mx = std::max(mx, term_log(n));
  NeumaierSum s;
  for (long long n = 1; n <= N; ++n) s.add(expl(term_log(n) - mx));
  // For n >= m + 50 the log term drops by at least 4 n log(1 + 50/m) / 2
  // > 100 per step (derivative 4 n log(m/n), decreasing), so the neglected
  // tail is under e * term(N+1).
  const long double tail_log = term_log(N + 1) - mx + 1.0L;
  long double total_log = mx + logl(s.value() + expl(tail_log));
  const long double rhs_log = logl(10.0L) + (long double)m * m -
                              2.0L * (long double)a * lm;
  PeakSumResult out;
  out.ratio = (double)expl(total_log - rhs_log);
  out.tail_log = (double)(tail_log + mx - rhs_log);
  out.pass = out.ratio <= 1.0;
  return out;
}

// Gap between a log curve and its chord: for u(x) = a log x interpolated
// linearly between x0 < x1, max_{[x0,x1]} (a log x - chord) is attained at
// x* = a / slope and is bounded by a (x1/x0 - 1)^2 / 8.
struct ChordGapResult {
  double max_gap = 0.0;
  double bound = 0.0;
  bool pass = false;
};

inline ChordGapResult log_chord_gap(double a, double x0, double x1,
                                    std::size_t grid = 256) {
  if (!(0 < x0 && x0 < x1)) throw std::invalid_argument("log_chord_gap: need 0 < x0 < x1");
  if (a < 0) throw std::invalid_argument("log_chord_gap: a must be >= 0");
  ChordGapResult out;
  out.bound = a * (x1 / x0 - 1.0) * (x1 / x0 - 1.0) / 8.0;
  if (a == 0.0) {
    out.pass = true;
    return out;
  }
  const double slope = a * (std::log(x1) - std::log(x0)) / (x1 - x0);
  auto u = [&](double x) {
    return a * std::log(x) - a * std::log(x0) - slope * (x - x0);
  };
  double mx = 0.0;
  const double xs = a / slope;  // stationary point of u
  if (xs > x0 && xs < x1) mx = u(xs);
  for (std::size_t i = 0; i <= grid; ++i) {
    const double x = x0 + (x1 - x0) * (double)i / (double)grid;
    mx = std::max(mx, u(x));
  }
  out.max_gap = mx;
  out.pass = mx <= out.bound * (1.0 + 1e-12) + 1e-300;
  return out;
}

// The two Stirling-type estimates behind the visit bounds:
//   (a) x^{8x} / (8x)! <= 1 / (4 x^3)   for real x >= 2,
//   (b) (n^2)^{n^2} / (n^2)! <= e^{n^2} / (sqrt(2 pi) n) for integer n >= 1.
struct StirlingRow {
  double x = 0.0;
  double margin_log = 0.0;  // log(bound) - log(value), >= 0 when the bound holds
};

struct StirlingChecks {
  std::vector<StirlingRow> factorial_rows;  // estimate (a)
  std::vector<StirlingRow> block_rows;      // estimate (b)
  bool pass = true;
};

inline StirlingChecks stirling_checks(long long n_max, double x_max,
                                      double x_step = 0.25) {
  if (n_max < 1 || !(x_max >= 2.0))
    throw std::invalid_argument("stirling_checks: need n_max >= 1, x_max >= 2");
  StirlingChecks out;
  const long double pi = 3.14159265358979323846264338327950288L;
  for (long double x = 2.0L; x <= (long double)x_max + 1e-12L; x += (long double)x_step) {
    const long double lhs = 8.0L * x * logl(x) - lgammal(8.0L * x + 1.0L);
    const long double rhs = -logl(4.0L * x * x * x);
    StirlingRow row;
    row.x = (double)x;
    row.margin_log = (double)(rhs - lhs);
    out.factorial_rows.push_back(row);
    if (row.margin_log < 0) out.pass = false;
  }
  for (long long n = 1; n <= n_max; ++n) {
    const long double n2 = (long double)n * n;
    const long double lhs = n2 * logl(n2) - lgammal(n2 + 1.0L);
    const long double rhs = n2 - logl(sqrtl(2.0L * pi) * (long double)n);
    StirlingRow row;
    row.x = (double)n;
    row.margin_log = (double)(rhs - lhs);
    out.block_rows.push_back(row);
    if (row.margin_log < 0) out.pass = false;
  }
  return out;
}

}  // namespace maclane
