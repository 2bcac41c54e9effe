#pragma once

// Growth scans over radius grids, the per-block mean bound, the gluing
// inequality that assembles per-block bounds into a global growth bound,
// and the per-class stride scheduling used in the p = 1 regime.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "circle_means.hpp"
#include "construction.hpp"
#include "enumeration.hpp"
#include "parallel.hpp"

namespace maclane {

// Default scan grid: every integer square m^2 <= r_max plus 8 geometric
// subdivisions of each gap (m^2, (m+1)^2), clipped to r_max.
inline std::vector<double> default_radius_grid(double r_max) {
  if (!(r_max >= 1.0))
    throw std::invalid_argument("default_radius_grid: r_max must be >= 1");
  std::vector<double> grid;
  for (long long m = 1; (double)m * m <= r_max; ++m) {
    const double r0 = (double)m * m;
    grid.push_back(r0);
    const double r1 = (double)(m + 1) * (m + 1);
    const double q = r1 / r0;
    for (int i = 1; i <= 8; ++i) {
      const double r = r0 * std::pow(q, (double)i / 9.0);
      if (r <= r_max) grid.push_back(r);
    }
  }
  return grid;
}

struct GrowthRow {
  double r = 0.0;
  double log_mean = 0.0;   // log M_{f,p}(r)
  double ratio = 0.0;      // M r^a e^{-r}, best estimate
  double ratio_hi = 0.0;   // certified upper bound
  long long J = 0;
  double tail = 0.0;       // rescaled tail certificate
};

struct GrowthReport {
  double p = 0.0;
  double a = 0.0;  // normalization exponent applied as r^a
  std::vector<GrowthRow> rows;
  double max_ratio = 0.0;
  double max_ratio_hi = 0.0;
  double max_tail = 0.0;
};

inline GrowthReport growth_report(const CoeffSource& src, double p, double a,
                                  const std::vector<double>& grid,
                                  const EvalOptions& opt = {}) {
  GrowthReport rep;
  rep.p = p;
  rep.a = a;
  rep.rows.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double r = grid[i];
    PMean m = pmean(src, p, r, opt);
    GrowthRow row;
    row.r = r;
    row.log_mean = log_growth(m, r);
    const double ra = std::pow(r, a);
    row.ratio = m.scaled * ra;
    row.ratio_hi = m.hi * ra;
    row.J = m.J;
    row.tail = m.tail;
    rep.rows[i] = row;
  });
  for (const GrowthRow& row : rep.rows) {
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.max_ratio_hi = std::max(rep.max_ratio_hi, row.ratio_hi);
    rep.max_tail = std::max(rep.max_tail, row.tail);
  }
  return rep;
}

// log M_{f,p}(r) must be convex in log r (Hadamard three-circles); checked
// on consecutive grid triples above a noise floor.
inline bool log_convexity_ok(const GrowthReport& rep, double floor_log = -60.0,
                             double tol = 1e-6) {
  for (std::size_t i = 2; i < rep.rows.size(); ++i) {
    const GrowthRow &a = rep.rows[i - 2], &b = rep.rows[i - 1], &c = rep.rows[i];
    if (a.log_mean < floor_log || b.log_mean < floor_log || c.log_mean < floor_log)
      continue;
    const double x0 = std::log(a.r), x1 = std::log(b.r), x2 = std::log(c.r);
    const double chord = a.log_mean + (c.log_mean - a.log_mean) * (x1 - x0) / (x2 - x0);
    if (b.log_mean > chord + tol) return false;
  }
  return true;
}

// Per-block bound M_{P_n f, p}(r) <= 20 e^r r^{-1/2} B at the block corner
// radii r = n^2 and r = (n+1)^2, where B is the p-norm on the circle of the
// block's coefficient polynomial (the kernel-target product).
struct BlockBoundRow {
  long long n = 0;
  double r = 0.0;
  double measured_hi = 0.0;   // certified upper bound of e^{-r} M_{P_n f, p}(r)
  double guaranteed = 0.0;    // 20 B_lo / sqrt(r)
  bool pass = true;           // vacuous for empty blocks
};

struct BlockBoundCheck {
  long long n = 0;
  NormEstimate block_norm;    // B
  std::vector<BlockBoundRow> rows;
  bool pass = true;
};

inline BlockBoundCheck block_bound_check(const CoeffSource& src, long long n,
                                         double p, const EvalOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("block_bound_check: n must be >= 1");
  BlockBoundCheck out;
  out.n = n;
  const long long lo = n * n, hi = (n + 1) * (n + 1) - 1;
  std::vector<std::complex<double>> c((std::size_t)(hi - lo + 1));
  bool any = false;
  for (long long s : src.support(lo, hi)) {
    RatC a = src.coeff(s);
    if (a.is_zero()) continue;
    c[(std::size_t)(s - lo)] = a.to_complex();
    any = true;
  }
  if (!any) return out;  // empty block: nothing to bound
  PNormOptions po;
  po.min_grid = opt.min_grid;
  po.sup_factor = opt.sup_factor;
  po.oversample = opt.oversample;
  po.max_fft_log2 = opt.max_fft_log2;
  out.block_norm = trig_pnorm(c, p, po);
  for (double r : {(double)(n * n), (double)((n + 1) * (n + 1))}) {
    NormEstimate m = block_pmean(src, n, p, r, opt);
    BlockBoundRow row;
    row.n = n;
    row.r = r;
    row.measured_hi = m.hi;
    row.guaranteed = 20.0 * out.block_norm.lo / std::sqrt(r);
    row.pass = row.measured_hi <= row.guaranteed * (1.0 + 1e-9);
    out.rows.push_back(row);
    out.pass = out.pass && row.pass;
  }
  return out;
}

// Gluing check: with b the smallest certified constant such that every
// examined block satisfies e^{-r} M_{P_n g, p}(r) r'^{2a} <= b at its corner
// radii r' in {n, n+1}, the assembled function must satisfy
// M_{g,p}(r) <= 1000 b e^r r^{-a} on the whole grid. Comparisons carry a
// relative 1e-9 allowance plus the truncation-tail floor.
struct GlueRow {
  double r = 0.0;
  double ratio = 0.0;     // e^{-r} M r^a, best estimate
  double ratio_hi = 0.0;  // certified upper bound
  double allowance = 0.0; // 1000 b + slack admitted at this radius
  bool pass = true;
};

struct GlueCheck {
  double b = 0.0;          // certified hypothesis constant
  long long n_cap = 0;     // blocks examined for the hypothesis side
  std::vector<GlueRow> rows;
  double max_ratio_hi = 0.0;
  bool pass = true;
};

inline GlueCheck glue_check(const CoeffSource& src, double p, double a,
                            const std::vector<double>& grid,
                            long long n_hyp_cap = 0,
                            const EvalOptions& opt = {}) {
  if (grid.empty()) throw std::invalid_argument("glue_check: empty grid");
  GlueCheck out;
  double r_max = 0.0;
  for (double r : grid) r_max = std::max(r_max, r);
  long long j_max = choose_truncation(r_max, src.growth_slope(), opt.tail_tol);
  long long auto_cap = (long long)std::ceil(std::sqrt((double)j_max)) + 1;
  out.n_cap = std::max(n_hyp_cap, auto_cap);

  for (long long n = 1; n <= out.n_cap; ++n) {
    const long long lo = n * n, hi = (n + 1) * (n + 1) - 1;
    if (src.support(lo, hi).empty()) continue;
    for (long long corner : {n, n + 1}) {
      const double r = (double)(corner * corner);
      NormEstimate m = block_pmean(src, n, p, r, opt);
      out.b = std::max(out.b, m.hi * std::pow((double)corner, 2.0 * a));
    }
  }

  out.rows.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double r = grid[i];
    PMean m = pmean(src, p, r, opt);
    GlueRow row;
    row.r = r;
    const double ra = std::pow(r, a);
    row.ratio = m.scaled * ra;
    row.ratio_hi = m.hi * ra;
    row.allowance = 1000.0 * out.b * (1.0 + 1e-9) + 1e-9 + 2.0 * m.tail * ra;
    row.pass = row.ratio_hi <= row.allowance;
    out.rows[i] = row;
  });
  for (const GlueRow& row : out.rows) {
    out.max_ratio_hi = std::max(out.max_ratio_hi, row.ratio_hi);
    out.pass = out.pass && row.pass;
  }
  return out;
}

// p = 1 regime: per-class stride headroom. The class-k piece f_k (the
// blocks of class k alone) must obey
//   M_{f_k,1}(r) <= 2^{-k} phi(r) e^r r^{-1/2}  on the grid;
// doubling the extra stride floor E pushes the piece's support to higher
// degrees and decreases its mean, so the smallest passing power of two is
// found by doubling search.
struct P1ClassResult {
  long k = 0;
  Int extra = 1;
  Int stride = 0;
  double worst_margin = 0.0;  // max over grid of measured_hi / allowance
  int trials = 0;
};

inline P1ClassResult p1_extra_for_class(
    long k, const std::function<double(double)>& phi,
    const BuildParams& base, std::shared_ptr<const PairSource> pairs,
    const std::vector<double>& grid, int max_doublings = 24,
    const EvalOptions& opt = {}) {
  if (k < 1) throw std::invalid_argument("p1_extra_for_class: k must be >= 1");
  if (grid.empty()) throw std::invalid_argument("p1_extra_for_class: empty grid");
  P1ClassResult out;
  out.k = k;
  auto single = std::make_shared<SingleClassSource>(pairs, k);
  Int E = 1;
  for (int t = 0; t <= max_doublings; ++t, E *= 2) {
    BuildParams params = base;
    params.mode = BuildMode::p1;
    params.p1_extra.assign((std::size_t)k, Int(1));
    params.p1_extra[(std::size_t)k - 1] = E;
    ConstructedStream piece(params, single);
    double worst = 0.0;
    bool ok = true;
    for (double r : grid) {
      PMean m = pmean(piece, 1.0, r, opt);
      const double allowance =
          std::pow(2.0, -(double)k) * phi(r) / std::sqrt(r);
      const double margin = m.hi / allowance;
      worst = std::max(worst, margin);
      if (margin > 1.0) {
        ok = false;
        break;
      }
    }
    out.trials = t + 1;
    if (ok) {
      out.extra = E;
      out.worst_margin = worst;
      out.stride = stride_for(*pairs->pair(k), params, k);
      return out;
    }
  }
  throw std::runtime_error(
      "p1_extra_for_class: class " + std::to_string(k) +
      " failed to meet its budget within the doubling limit");
}

}  // namespace maclane
