#pragma once

// Assembly of the entire function f(z) = sum a_j z^j / j! from per-class
// target pairs. Taylor indices are partitioned into blocks [n^2, (n+1)^2);
// the block of an even n in class k with n >= 10 * stride(k) carries the
// monomial coefficients of z^{n^2} K_m(z^stride) qt(z), where K_m is the
// flat kernel with m = floor(n / stride) and qt is the target coefficient
// polynomial. All other blocks are zero.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "coeff_poly.hpp"
#include "enumeration.hpp"
#include "rational.hpp"

namespace maclane {

// Abstract coefficient stream: a_j in f = sum a_j z^j / j!.
class CoeffSource {
 public:
  virtual ~CoeffSource() = default;
  virtual RatC coeff(long long j) const = 0;
  // Sorted indices of (possibly) nonzero coefficients in [lo, hi].
  virtual std::vector<long long> support(long long lo, long long hi) const = 0;
  // |a_j| <= slope * max(1, j) for all j.
  virtual double growth_slope() const { return 1.0; }
};

struct BlockData {
  long long n = 0;
  long k = 0;             // class of n (0 for odd or zero n)
  bool active = false;
  long long repeat = 0;   // m = floor(n / stride), 0 when inactive
  // (index, value) with n^2 <= index <= (n+1)^2 - 1, sorted by index.
  std::vector<std::pair<long long, RatC>> entries;
  std::vector<long long> visits;  // indices s where the kernel coefficient is exactly 1

  RatC at(long long j) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), j,
        [](const std::pair<long long, RatC>& e, long long v) { return e.first < v; });
    if (it != entries.end() && it->first == j) return it->second;
    return RatC{};
  }
};

class ConstructedStream : public CoeffSource {
 public:
  ConstructedStream(BuildParams params, std::shared_ptr<const PairSource> pairs)
      : params_(std::move(params)), pairs_(std::move(pairs)) {
    params_.validate();
    if (!pairs_) throw std::invalid_argument("ConstructedStream: null pair source");
  }

  const BuildParams& params() const { return params_; }

  std::optional<TargetPair> class_pair(long k) const { return pairs_->pair(k); }

  // stride (alpha) of class k; cached.
  Int stride(long k) const {
    std::lock_guard<std::mutex> lk(mu_);
    return stride_locked(k);
  }

  bool is_active(long long n) const {
    if (n <= 0 || n % 2 != 0) return false;
    long k = block_class(n);
    std::lock_guard<std::mutex> lk(mu_);
    auto pr = pair_locked(k);
    if (!pr) return false;
    return Int(n) >= 10 * stride_locked(k);
  }

  std::shared_ptr<const BlockData> block(long long n) const {
    if (n < 0) throw std::invalid_argument("block: n must be >= 0");
    std::lock_guard<std::mutex> lk(mu_);
    auto it = blocks_.find(n);
    if (it != blocks_.end()) return it->second;
    auto data = std::make_shared<BlockData>(build_block(n));
    blocks_.emplace(n, data);
    return data;
  }

  // Visit indices of block n (empty when the block is inactive).
  std::vector<long long> visit_set(long long n) const { return block(n)->visits; }

  RatC coeff(long long j) const override {
    if (j < 0) throw std::invalid_argument("coeff: negative index");
    if (j == 0) return RatC{};
    long long n = (long long)std::sqrt((double)j);
    while (n * n > j) --n;
    while ((n + 1) * (n + 1) <= j) ++n;
    if (n % 2 != 0 || n == 0) return RatC{};
    return block(n)->at(j);
  }

  std::vector<long long> support(long long lo, long long hi) const override {
    if (lo < 0) lo = 0;
    std::vector<long long> out;
    if (hi < lo) return out;
    long long n0 = (long long)std::sqrt((double)lo);
    while (n0 * n0 > lo) --n0;
    long long n1 = (long long)std::sqrt((double)hi);
    while ((n1 + 1) * (n1 + 1) <= hi) ++n1;
    for (long long n = std::max<long long>(n0, 2); n <= n1; ++n) {
      if (n % 2 != 0) continue;
      auto b = block(n);
      for (const auto& e : b->entries)
        if (e.first >= lo && e.first <= hi) out.push_back(e.first);
    }
    return out;
  }

 private:
  BuildParams params_;
  std::shared_ptr<const PairSource> pairs_;
  mutable std::mutex mu_;
  mutable std::map<long, std::optional<TargetPair>> pair_cache_;
  mutable std::map<long, Int> stride_cache_;
  mutable std::map<long long, std::shared_ptr<const BlockData>> blocks_;

  const std::optional<TargetPair>& pair_locked(long k) const {
    auto it = pair_cache_.find(k);
    if (it == pair_cache_.end())
      it = pair_cache_.emplace(k, pairs_->pair(k)).first;
    return it->second;
  }

  Int stride_locked(long k) const {
    auto it = stride_cache_.find(k);
    if (it == stride_cache_.end()) {
      auto pr = pair_locked(k);
      if (!pr) throw std::invalid_argument("stride: class has no target pair");
      it = stride_cache_.emplace(k, stride_for(*pr, params_, k)).first;
    }
    return it->second;
  }

  bool use_flat_sign_kernel() const {
    return params_.mode == BuildMode::standard &&
           (std::isinf(params_.p) || params_.p >= 2.0);
  }

  BlockData build_block(long long n) const {
    BlockData b;
    b.n = n;
    if (n <= 0 || n % 2 != 0) return b;
    b.k = block_class(n);
    auto pr = pair_locked(b.k);
    if (!pr) return b;
    Int alpha = stride_locked(b.k);
    if (Int(n) < 10 * alpha) return b;

    b.active = true;
    const long long a = alpha.convert_to<long long>();  // n >= 10 alpha keeps this small
    b.repeat = n / a;
    CoeffPoly kern = use_flat_sign_kernel()
                         ? rudin_shapiro_poly((std::size_t)b.repeat)
                         : vallee_poussin_poly((std::size_t)b.repeat);
    const std::vector<RatC>& q = pr->poly.coeffs;
    const long long base = n * n;
    const long long top = (n + 1) * (n + 1) - 1;
    for (std::size_t i = 0; i < kern.coeffs.size(); ++i) {
      const RatC& kc = kern.coeffs[i];
      if (kc.is_zero()) continue;
      const long long off = base + (kern.lo + (long long)i) * a;
      if (kc == RatC(Rat(1))) b.visits.push_back(off);
      for (std::size_t u = 0; u < q.size(); ++u) {
        if (q[u].is_zero()) continue;
        const long long idx = off + (long long)u;
        if (idx > top)
          throw std::logic_error("build_block: entry escapes its block");
        b.entries.emplace_back(idx, kc * q[u]);
      }
    }
    std::sort(b.entries.begin(), b.entries.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return b;
  }
};

// Fixtures for tests and cross-checks.

// e^z: a_j = 1 for all j.
class ExpStream : public CoeffSource {
 public:
  RatC coeff(long long) const override { return RatC(Rat(1)); }
  std::vector<long long> support(long long lo, long long hi) const override {
    std::vector<long long> out;
    for (long long j = std::max<long long>(lo, 0); j <= hi; ++j) out.push_back(j);
    return out;
  }
};

// c * z^s / s!.
class MonomialStream : public CoeffSource {
 public:
  MonomialStream(long long s, RatC c = RatC(Rat(1))) : s_(s), c_(std::move(c)) {}
  RatC coeff(long long j) const override { return j == s_ ? c_ : RatC{}; }
  std::vector<long long> support(long long lo, long long hi) const override {
    if (s_ >= lo && s_ <= hi && !c_.is_zero()) return {s_};
    return {};
  }
  double growth_slope() const override {
    double m = std::sqrt(to_double(c_.abs_sq()));
    return std::max(1.0, m / std::max<double>(1, (double)s_));
  }

 private:
  long long s_;
  RatC c_;
};

class ZeroStream : public CoeffSource {
 public:
  RatC coeff(long long) const override { return RatC{}; }
  std::vector<long long> support(long long, long long) const override { return {}; }
};

// Explicit sparse coefficient map.
class MapStream : public CoeffSource {
 public:
  explicit MapStream(std::map<long long, RatC> entries, double slope = 1.0)
      : entries_(std::move(entries)), slope_(slope) {
    for (const auto& [j, v] : entries_) {
      if (j < 0) throw std::invalid_argument("MapStream: negative index");
      (void)v;
    }
  }
  RatC coeff(long long j) const override {
    auto it = entries_.find(j);
    return it == entries_.end() ? RatC{} : it->second;
  }
  std::vector<long long> support(long long lo, long long hi) const override {
    std::vector<long long> out;
    for (auto it = entries_.lower_bound(lo); it != entries_.end() && it->first <= hi; ++it)
      if (!it->second.is_zero()) out.push_back(it->first);
    return out;
  }
  double growth_slope() const override { return slope_; }

 private:
  std::map<long long, RatC> entries_;
  double slope_;
};

// Sum of two streams.
class SumStream : public CoeffSource {
 public:
  SumStream(std::shared_ptr<const CoeffSource> a, std::shared_ptr<const CoeffSource> b)
      : a_(std::move(a)), b_(std::move(b)) {}
  RatC coeff(long long j) const override { return a_->coeff(j) + b_->coeff(j); }
  std::vector<long long> support(long long lo, long long hi) const override {
    std::vector<long long> sa = a_->support(lo, hi), sb = b_->support(lo, hi);
    std::vector<long long> out;
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
    return out;
  }
  double growth_slope() const override {
    return a_->growth_slope() + b_->growth_slope();
  }

 private:
  std::shared_ptr<const CoeffSource> a_, b_;
};

// Restriction of a pair source to a single class; other classes inactive.
class SingleClassSource : public PairSource {
 public:
  SingleClassSource(std::shared_ptr<const PairSource> inner, long k)
      : inner_(std::move(inner)), k_(k) {}
  std::optional<TargetPair> pair(long k) const override {
    if (k != k_) return std::nullopt;
    return inner_->pair(k);
  }

 private:
  std::shared_ptr<const PairSource> inner_;
  long k_;
};

// CSV dump "j,numerator,denominator" for real coefficients in [lo, hi];
// throws if any coefficient has a nonzero imaginary part.
inline void dump_coeffs_csv(const CoeffSource& src, long long lo, long long hi,
                            std::ostream& os) {
  os << "j,numerator,denominator\n";
  for (long long j : src.support(lo, hi)) {
    RatC c = src.coeff(j);
    if (c.is_zero()) continue;
    if (!c.is_real())
      throw std::domain_error("dump_coeffs_csv: complex coefficient at index " +
                              std::to_string(j));
    os << j << "," << rat_num(c.re) << "," << rat_den(c.re) << "\n";
  }
}

}  // namespace maclane
