#pragma once

// Verification of the frequent-hypercyclicity mechanics: at every visit
// index s of an active block, the s-th derivative of f stays uniformly
// close to the class target on its disc; visit indices have positive
// density; and block means at the block's own scale stay bounded below.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "circle_means.hpp"
#include "construction.hpp"
#include "enumeration.hpp"
#include "growth.hpp"

namespace maclane {

// Certified sup over |z| = ell of |(d/dz)^s f - q| where q is given by its
// coefficient numbers q_u (q = sum q_u z^u / u!). The difference has the
// window coefficients cancelled exactly in rational arithmetic before any
// rounding.
struct DerivativeError {
  double sup_error = 0.0;  // certified upper bound
  double sampled = 0.0;    // grid maximum (lower bound)
  long long U = 0;         // window truncation
  double tail = 0.0;       // bound on the neglected terms
};

inline DerivativeError derivative_sup_error(const CoeffSource& src, long long s,
                                            const RationalPoly& q, long long ell,
                                            const EvalOptions& opt = {}) {
  if (s < 0 || ell < 1)
    throw std::invalid_argument("derivative_sup_error: need s >= 0, ell >= 1");
  const double slope = src.growth_slope();
  // Tail of sum_{u>U} |a_{s+u}| ell^u / u! with |a_j| <= slope j: terms at
  // least halve once u >= 2 ell, so 2 slope (s+U+1) ell^{U+1}/(U+1)! covers it.
  long long U = 16 * ell + 64;
  auto tail_log = [&](long long u) {
    return logl(2.0L * (long double)slope * (long double)(s + u + 2)) +
           (long double)(u + 1) * logl((long double)ell) - log_factorial(u + 1);
  };
  while (tail_log(U) > logl(1e-15L)) U += U / 4 + 32;

  std::vector<std::complex<double>> c((std::size_t)U + 1);
  for (long long u = 0; u <= U; ++u) {
    RatC g = src.coeff(s + u);
    if (u < (long long)q.coeffs.size()) g = g - q.coeffs[u];
    if (g.is_zero()) continue;
    const double w = (double)expl((long double)u * logl((long double)ell) -
                                  log_factorial(u));
    std::complex<double> z = g.to_complex();
    c[(std::size_t)u] = {z.real() * w, z.imag() * w};
  }
  DerivativeError out;
  out.U = U;
  out.tail = (double)expl(tail_log(U));
  bool any = false;
  for (const auto& v : c)
    if (v != std::complex<double>{}) any = true;
  if (any) {
    PNormOptions po;
    po.min_grid = opt.min_grid;
    po.sup_factor = opt.sup_factor;
    po.max_fft_log2 = opt.max_fft_log2;
    NormEstimate e = trig_pnorm(c, std::numeric_limits<double>::infinity(), po);
    out.sampled = e.lo;
    out.sup_error = e.hi + out.tail;
  } else {
    out.sup_error = out.tail;
  }
  return out;
}

// One verified visit: block n of class k, visit index s, against the class
// target on the disc of radius ell. s1/s2 are the analytic bounds on the
// in-block and beyond-block contributions; their sum certifies the 1/ell
// tolerance independently of the measurement.
struct VisitReport {
  long k = 0;
  long long n = 0;
  long long s = 0;
  long long ell = 1;
  double sup_error = 0.0;
  double tolerance = 0.0;
  double s1_bound = 0.0;
  double s2_bound = 0.0;
  bool pass = false;
};

inline VisitReport verify_visit(const ConstructedStream& f, long long n,
                                long long s = -1, const EvalOptions& opt = {}) {
  VisitReport rep;
  auto b = f.block(n);
  if (!b->active)
    throw std::invalid_argument("verify_visit: block is inactive");
  rep.k = b->k;
  rep.n = n;
  auto pr = f.class_pair(b->k);
  const long long ell = pr->radius;
  rep.ell = ell;
  if (s < 0) s = b->visits.front();
  if (std::find(b->visits.begin(), b->visits.end(), s) == b->visits.end())
    throw std::invalid_argument("verify_visit: s is not a visit index of block n");
  rep.s = s;
  rep.tolerance = 1.0 / (double)ell;
  DerivativeError err = derivative_sup_error(f, s, pr->poly, ell, opt);
  rep.sup_error = err.sup_error;
  const long double lell = logl((long double)ell);
  rep.s1_bound = (double)expl(logl(2.0L) + (long double)(8 * ell + 1) * lell -
                              log_factorial(8 * ell));
  rep.s2_bound = (double)expl(logl(2.0L) + (long double)(2 * n + 3) * lell -
                              log_factorial(2 * n + 1));
  rep.pass = rep.sup_error <= rep.tolerance;
  return rep;
}

// Density of visit indices of class k up to horizon N.
struct VisitDensityRow {
  long long n = 0;
  long long repeat = 0;  // m
  long long visits = 0;  // visit indices of this block at or below N
};

struct VisitDensity {
  long k = 0;
  long long horizon = 0;
  long long count = 0;
  double density = 0.0;
  std::vector<VisitDensityRow> rows;
};

inline VisitDensity visit_density(const ConstructedStream& f, long k,
                                  long long horizon) {
  if (k < 1 || horizon < 1)
    throw std::invalid_argument("visit_density: need k >= 1, horizon >= 1");
  VisitDensity out;
  out.k = k;
  out.horizon = horizon;
  // n in class k: n = 2^k (2j - 1), j = 1, 2, ...
  const long long step = 1LL << k;
  for (long long n = step; n * n <= horizon; n += 2 * step) {
    auto b = f.block(n);
    if (!b->active) continue;
    VisitDensityRow row;
    row.n = n;
    row.repeat = b->repeat;
    for (long long s : b->visits)
      if (s <= horizon) ++row.visits;
    out.count += row.visits;
    out.rows.push_back(row);
  }
  out.density = (double)out.count / (double)horizon;
  return out;
}

// Certified lower bounds: value_n = e^{-n^2} M_{f,p}(n^2) n^{2a}, reported
// with its certified lower bound. a defaults to the growth exponent of p.
struct ProbeRow {
  long long n = 0;
  double value = 0.0;
  double lo = 0.0;
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  double min_lo = std::numeric_limits<double>::infinity();
};

inline ProbeResult lower_bound_probe(const CoeffSource& src, double p,
                                     const std::vector<long long>& ns,
                                     double a = std::numeric_limits<double>::quiet_NaN(),
                                     const EvalOptions& opt = {}) {
  if (std::isnan(a)) a = growth_exponent(p);
  ProbeResult out;
  for (long long n : ns) {
    if (n < 1) throw std::invalid_argument("lower_bound_probe: n must be >= 1");
    const double r = (double)(n * n);
    PMean m = pmean(src, p, r, opt);
    ProbeRow row;
    row.n = n;
    const double na = std::pow((double)n, 2.0 * a);
    row.value = m.scaled * na;
    row.lo = m.lo * na;
    out.rows.push_back(row);
    out.min_lo = std::min(out.min_lo, row.lo);
  }
  return out;
}

// Density up to N of indices j >= 1 whose coefficient has modulus >= 1
// (exact rational comparison).
struct CoeffDensity {
  long long horizon = 0;
  long long count = 0;
  double density = 0.0;
};

inline CoeffDensity coefficient_unit_density(const CoeffSource& src, long long horizon) {
  if (horizon < 1)
    throw std::invalid_argument("coefficient_unit_density: horizon must be >= 1");
  CoeffDensity out;
  out.horizon = horizon;
  for (long long j : src.support(1, horizon)) {
    RatC a = src.coeff(j);
    if (a.abs_sq() >= 1) ++out.count;
  }
  out.density = (double)out.count / (double)horizon;
  return out;
}

}  // namespace maclane
