#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "maclane/circle_means.hpp"
#include "maclane/construction.hpp"
#include "maclane/growth.hpp"
#include "maclane/inequality_checks.hpp"
#include "maclane/logdomain.hpp"

using namespace maclane;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

BuildParams desk_params() {
  BuildParams params;
  params.margin = 10;
  return params;
}

std::shared_ptr<const PairSource> one_target() {
  TargetPair t;
  t.poly.coeffs = {RatC(Rat(1))};
  t.radius = 1;
  return std::make_shared<OverrideList>(std::vector<TargetPair>{t});
}

// log of M_2(r)^2 = sum_j r^{2j} / (j!)^2 for e^z, summed independently.
long double exp_l2_log(double r) {
  NeumaierSum acc;
  long double mx = -1e30L;
  const long long J = 4 * (long long)r + 200;
  for (long long j = 0; j <= J; ++j) {
    long double t = 2.0L * j * logl((long double)r) - 2.0L * log_factorial(j);
    mx = std::max(mx, t);
  }
  for (long long j = 0; j <= J; ++j) {
    long double t = 2.0L * j * logl((long double)r) - 2.0L * log_factorial(j);
    acc.add(expl(t - mx));
  }
  return mx + logl(acc.value());
}

}  // namespace

TEST(Truncation, TailCertificates) {
  long long J = choose_truncation(100.0, 1.0, 1e-12);
  EXPECT_GE(J, 264);
  EXPECT_LE((double)expl(log_tail_bound(J, 100.0, 1.0)), 1e-12);
  // tail bound is valid and decreasing in J
  EXPECT_LT(log_tail_bound(J + 50, 100.0, 1.0), log_tail_bound(J, 100.0, 1.0));
}

TEST(EvalCircle, ExponentialMatchesFormula) {
  ExpStream e;
  for (std::size_t N : {128u, 100u}) {  // FFT and sparse paths
    auto s = eval_circle(e, 3.0, N);
    EXPECT_LE(s.tail, 1e-12);
    for (std::size_t j = 0; j < N; ++j) {
      double th = 2.0 * M_PI * (double)j / (double)N;
      std::complex<double> want =
          std::exp(std::complex<double>(3.0 * std::cos(th) - 3.0, 3.0 * std::sin(th)));
      EXPECT_NEAR(std::abs(s.values[j] - want), 0.0, 1e-12) << "N=" << N << " j=" << j;
    }
  }
}

TEST(EvalCircle, LinearFixture) {
  MonomialStream z(1);
  auto s = eval_circle(z, 1.0, 16);
  for (std::size_t j = 0; j < 16; ++j) {
    double th = 2.0 * M_PI * (double)j / 16.0;
    std::complex<double> want = std::polar(std::exp(-1.0), th);
    EXPECT_NEAR(std::abs(s.values[j] - want), 0.0, 1e-13);
  }
}

TEST(PMeanOp, LinearFixtureAllP) {
  MonomialStream z(1);
  for (double r : {1.0, 5.0}) {
    for (double p : {1.0, 1.7, 2.0, kInf}) {
      PMean m = pmean(z, p, r);
      const double want = r * std::exp(-r);
      EXPECT_NEAR(m.scaled, want, 1e-12) << "p=" << p << " r=" << r;
      EXPECT_LE(m.lo, want + 1e-15);
      EXPECT_GE(m.hi, want - 1e-15);
    }
  }
}

TEST(PMeanOp, ExponentialSup) {
  ExpStream e;
  PMean m = pmean(e, kInf, 20.0);
  EXPECT_NEAR(m.scaled, 1.0, 1e-9);
  EXPECT_GE(m.hi, 1.0);
  EXPECT_LE(m.lo, 1.0);
  EXPECT_GE(m.lo, 0.9);
}

TEST(PMeanOp, ExponentialL2AgainstSeries) {
  ExpStream e;
  for (double r : {2.0, 10.0, 50.0}) {
    PMean m = pmean(e, 2.0, r);
    double want = (double)expl(0.5L * exp_l2_log(r) - (long double)r);
    EXPECT_NEAR(m.scaled / want, 1.0, 1e-10) << "r=" << r;
  }
}

TEST(PMeanOp, EmptyStream) {
  ZeroStream z;
  PMean m = pmean(z, kInf, 100.0);
  EXPECT_EQ(m.scaled, 0.0);
  EXPECT_EQ(m.lo, 0.0);
  EXPECT_LE(m.hi, 1e-12);
}

TEST(PMeanOp, LogGrowthMonotone) {
  ExpStream e;
  MonomialStream z(1);
  double prev_e = -1e300, prev_z = -1e300;
  for (double r : {1.0, 2.0, 4.0, 9.0, 16.0}) {
    double ge = log_growth(pmean(e, kInf, r), r);
    double gz = log_growth(pmean(z, 2.0, r), r);
    EXPECT_GT(ge, prev_e);
    EXPECT_GT(gz, prev_z);
    prev_e = ge;
    prev_z = gz;
  }
}

TEST(PMeanOp, ClusterPathBracketsDirectMax) {
  // Two frequency clusters near the Taylor peak, separated by more than the
  // automatic gap, with a tiny FFT cap forcing the cluster dispatch. The
  // first cluster dominates so the triangle-inequality lower bound is
  // positive, and the certified bracket must agree with both a directly
  // sampled maximum and the single-window run.
  std::map<long long, RatC> entries;
  for (long long j = 2400; j <= 2405; ++j) entries[j] = RatC(Rat(10));
  for (long long j = 2600; j <= 2605; ++j) entries[j] = RatC(Rat(j % 2 ? 1 : -1));
  MapStream f(entries);
  const double r = 2500.0;

  EvalOptions tiny;
  tiny.max_fft_log2 = 8;
  tiny.min_grid = 64;
  PMean m = pmean(f, kInf, r, tiny);
  EXPECT_TRUE(m.clustered);
  EXPECT_GT(m.lo, 0.0);
  EXPECT_GT(m.hi, m.lo);

  // The sampled maximum never exceeds the certified hi, and the grid is
  // fine enough (beat frequency ~200 vs 4096 samples) to land near the sup.
  auto s = eval_circle(f, r, 1 << 12);
  double direct = 0.0;
  for (const auto& v : s.values) direct = std::max(direct, std::abs(v));
  EXPECT_LE(direct, m.hi * (1 + 1e-9));
  EXPECT_GE(direct, m.lo * 0.7);

  PMean wide = pmean(f, kInf, r);
  EXPECT_FALSE(wide.clustered);
  EXPECT_LE(m.lo, wide.hi);
  EXPECT_GE(m.hi, wide.lo);
  EXPECT_LE(direct, wide.hi * (1 + 1e-9));
}

TEST(PMeanOp, BlockMeanMatchesWholeStreamForSingleBlock) {
  ConstructedStream f(desk_params(), one_target());
  const double r = 1010.0 * 1010.0;
  PMean whole = pmean(f, kInf, r);
  NormEstimate blk = block_pmean(f, 1010, kInf, r);
  EXPECT_GT(blk.lo, 0.0);
  EXPECT_LE(whole.lo, blk.hi * (1 + 1e-9));
  EXPECT_GE(whole.hi, blk.lo * (1 - 1e-9));
  EXPECT_NEAR(whole.scaled / blk.value, 1.0, 1e-6);
}

TEST(Multipliers, ExactAnchorsAndBound) {
  auto t2 = lambda_table(2);
  EXPECT_DOUBLE_EQ(t2.lambda[0], 1.0);
  EXPECT_DOUBLE_EQ(t2.lambda[1], 0.8);  // 4/5
  EXPECT_DOUBLE_EQ(t2.lambda_prime[0], 1.0);
  for (long long n : {1LL, 2LL, 7LL, 64LL, 511LL}) {
    auto t = lambda_table(n);
    EXPECT_TRUE(t.within_bound) << n;
    EXPECT_LE(t.max_dev, 12.0 / (double)n) << n;
    for (std::size_t i = 1; i < t.lambda.size(); ++i)
      EXPECT_LT(t.lambda[i], t.lambda[i - 1]);
    for (std::size_t i = 1; i < t.lambda_prime.size(); ++i)
      EXPECT_LT(t.lambda_prime[i], t.lambda_prime[i - 1]);
  }
  EXPECT_THROW(lambda_table(0), std::invalid_argument);
}

TEST(HeatKernel, UnitMassAndPositivity) {
  for (long long n : {1LL, 2LL, 16LL}) {
    auto h = heat_kernel_mass(n);
    EXPECT_NEAR(h.mass, 1.0, 1e-10) << n;
    EXPECT_TRUE(h.positive) << n;
    EXPECT_GE(h.min_value, 0.0) << n;
    EXPECT_GE(h.peak, 2.5 * (double)n) << n;  // g(0) >= sqrt(2 pi) n
  }
  // for small n the minimum (near theta = pi) is comfortably representable
  EXPECT_GT(heat_kernel_mass(1).min_value, 1e-3);
  EXPECT_GT(heat_kernel_mass(2).min_value, 1e-9);
}

TEST(PeakSum, FrozenOracles) {
  EXPECT_NEAR(peak_sum_ratio(1, 0.0).ratio, 0.107846682298, 1e-9);
  EXPECT_NEAR(peak_sum_ratio(1, 1.0).ratio, 0.101961563708, 1e-9);
  EXPECT_NEAR(peak_sum_ratio(40, 0.5).ratio, 0.127170282997, 1e-9);
}

TEST(PeakSum, GridBelowOne) {
  double worst = 0.0;
  for (long long m = 1; m <= 50; ++m) {
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      auto r = peak_sum_ratio(m, a);
      EXPECT_TRUE(r.pass) << m << " " << a;
      worst = std::max(worst, r.ratio);
    }
  }
  EXPECT_NEAR(worst, 0.18412, 1e-4);
}

TEST(ChordGap, ClosedFormAndBound) {
  auto flat = log_chord_gap(0.0, 1.0, 2.0);
  EXPECT_EQ(flat.max_gap, 0.0);
  EXPECT_TRUE(flat.pass);

  auto g = log_chord_gap(1.0, 1.0, 2.0);
  double want = std::log(2.0) - 1.0 - std::log(std::log(2.0));
  EXPECT_NEAR(g.max_gap, want, 1e-9);
  EXPECT_DOUBLE_EQ(g.bound, 0.125);
  EXPECT_TRUE(g.pass);

  for (long long m = 1; m <= 50; ++m) {
    auto sq = log_chord_gap(0.5, (double)(m * m), (double)((m + 1) * (m + 1)));
    EXPECT_TRUE(sq.pass) << m;
  }
  EXPECT_THROW(log_chord_gap(1.0, 2.0, 1.0), std::invalid_argument);
}

TEST(Stirling, MarginsAndAnchor) {
  auto s = stirling_checks(100, 100.0, 1.0);
  EXPECT_TRUE(s.pass);
  // x = 2: margin is log((1/32) / (2^16 / 16!))
  EXPECT_NEAR(s.factorial_rows[0].margin_log,
              std::log(20922789888000.0 / (32.0 * 65536.0)), 1e-9);
  for (const auto& row : s.factorial_rows) EXPECT_GE(row.margin_log, 0.0);
  for (const auto& row : s.block_rows) EXPECT_GE(row.margin_log, 0.0);
}

TEST(Grid, DefaultRadiusGrid) {
  auto g = default_radius_grid(100.0);
  ASSERT_FALSE(g.empty());
  EXPECT_DOUBLE_EQ(g.front(), 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_LT(g[i - 1], g[i]);
    EXPECT_LE(g[i], 100.0);
  }
  // every square up to r_max appears
  for (long long m = 1; m * m <= 100; ++m)
    EXPECT_NE(std::find(g.begin(), g.end(), (double)(m * m)), g.end());
  // 8 subdivisions between consecutive squares
  EXPECT_EQ(std::count_if(g.begin(), g.end(),
                          [](double r) { return r > 1.0 && r < 4.0; }),
            8);
}

TEST(Growth, ReportAndConvexity) {
  MonomialStream z(1);
  auto grid = default_radius_grid(64.0);
  auto rep = growth_report(z, kInf, 0.0, grid);
  ASSERT_EQ(rep.rows.size(), grid.size());
  // max of r e^{-r} on the grid is at r = 1
  EXPECT_NEAR(rep.max_ratio, std::exp(-1.0), 1e-12);
  EXPECT_TRUE(log_convexity_ok(rep));

  ExpStream e;
  auto rep2 = growth_report(e, kInf, 0.0, default_radius_grid(36.0));
  EXPECT_NEAR(rep2.max_ratio, 1.0, 1e-9);
  EXPECT_TRUE(log_convexity_ok(rep2));
  EXPECT_LE(rep2.max_tail, 1e-12);
}

TEST(Growth, BlockBound) {
  ConstructedStream f(desk_params(), one_target());
  auto chk = block_bound_check(f, 1010, kInf);
  EXPECT_TRUE(chk.pass);
  ASSERT_EQ(chk.rows.size(), 2u);
  EXPECT_GT(chk.block_norm.lo, 0.0);
  for (const auto& row : chk.rows) {
    EXPECT_GT(row.measured_hi, 0.0);
    EXPECT_LE(row.measured_hi, row.guaranteed);
  }

  auto empty = block_bound_check(f, 1008, kInf);
  EXPECT_TRUE(empty.pass);
  EXPECT_TRUE(empty.rows.empty());

  // z^9 / 9!: block 3, norm 1, mean at r = 9 is exactly t_9(9)
  MonomialStream mono(9);
  auto m3 = block_bound_check(mono, 3, kInf);
  EXPECT_TRUE(m3.pass);
  EXPECT_NEAR(m3.rows[0].measured_hi, taylor_weight(9, 9.0), 1e-9);
  EXPECT_NEAR(m3.rows[0].guaranteed, 20.0 / 3.0, 1e-9);
}

TEST(Growth, GlueOnFixtures) {
  ExpStream e;
  auto glue = glue_check(e, kInf, 0.0, default_radius_grid(100.0));
  EXPECT_TRUE(glue.pass);
  EXPECT_GT(glue.b, 0.0);
  EXPECT_LT(glue.b, 2.0);
  // the true sup ratio is exactly 1; the certified hi carries the
  // Bernstein sampling factor (at most ~1.25 at sup_factor 16)
  EXPECT_GE(glue.max_ratio_hi, 1.0 - 1e-9);
  EXPECT_LE(glue.max_ratio_hi, 1.3);

  ZeroStream z;
  auto gz = glue_check(z, 2.0, 0.25, default_radius_grid(25.0));
  EXPECT_TRUE(gz.pass);
  EXPECT_EQ(gz.b, 0.0);
}

TEST(Growth, P1ScheduleFindsUnitExtra) {
  auto pairs = std::make_shared<DefaultEnumeration>();
  BuildParams base;
  base.mode = BuildMode::p1;
  auto phi = [](double r) { return 1.0 + std::log(1.0 + r); };
  std::vector<double> grid = {9000.0, 10000.0};

  // class 1 carries the zero-polynomial target: the piece is empty and the
  // unit extra passes with margin equal to the tail certificate (which
  // rounds to zero at these radii)
  auto res = p1_extra_for_class(1, phi, base, pairs, grid);
  EXPECT_EQ(res.extra, 1);
  EXPECT_EQ(res.stride, 9);
  EXPECT_LE(res.worst_margin, 1.0);
  EXPECT_GE(res.worst_margin, 0.0);

  // class 2 carries a nonzero constant target and real block mass
  auto res2 = p1_extra_for_class(2, phi, base, pairs, grid);
  EXPECT_EQ(res2.extra, 1);
  EXPECT_EQ(res2.stride, 9);
  EXPECT_GT(res2.worst_margin, 0.01);
  EXPECT_LT(res2.worst_margin, 0.9);
}
