#pragma once

// Target pairs (q, ell): a Gaussian-rational polynomial given by the numbers
// q_j in q(z) = sum q_j z^j / j!, together with an integer disc radius ell
// that must admit the pair, ell >= sum |q_j|. Pairs are enumerated by height
// so that every admissible pair appears exactly once, and the k-th pair is
// the approximation target for block class k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rational.hpp"

namespace maclane {

// Polynomial target stored by its coefficient numbers q_0..q_d; empty vector
// is the zero polynomial. Invariant: the top entry is nonzero when nonempty.
struct RationalPoly {
  std::vector<RatC> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  long long degree() const {
    return coeffs.empty() ? 0 : (long long)coeffs.size() - 1;
  }

  void normalize() {
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  }

  // max(degree + 1, largest coefficient height); the zero polynomial has
  // height 1.
  Int height() const {
    Int h = coeffs.empty() ? Int(1) : Int(coeffs.size());
    for (const RatC& c : coeffs) {
      Int ch = coeff_height(c);
      if (ch > h) h = ch;
    }
    return h;
  }

  bool operator==(const RationalPoly& o) const { return coeffs == o.coeffs; }
};

// (degree, then coefficient tuple from q_0 up, each lexicographic on
// (re, im)); the zero polynomial sorts first.
inline bool poly_less(const RationalPoly& a, const RationalPoly& b) {
  if (a.coeffs.size() != b.coeffs.size())
    return a.coeffs.size() < b.coeffs.size();
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] != b.coeffs[i]) return ratc_less(a.coeffs[i], b.coeffs[i]);
  }
  return false;
}

struct TargetPair {
  RationalPoly poly;
  long long radius = 1;  // ell: closed disc radius for the uniform visit

  Int height() const {
    Int h = poly.height();
    if (Int(radius) > h) h = Int(radius);
    return h;
  }
};

inline bool pair_admissible(const TargetPair& t) {
  if (t.radius < 1) return false;
  return l1_at_most(t.poly.coeffs, Rat(t.radius));
}

// a(p): growth exponent 1/4 for p >= 2 (including sup), 1/(2p) for p in (1,2).
inline double growth_exponent(double p) {
  if (std::isinf(p)) return 0.25;
  if (!(p > 1.0)) throw std::invalid_argument("growth_exponent: p must exceed 1");
  return p >= 2.0 ? 0.25 : 1.0 / (2.0 * p);
}

// Class of an even n >= 2: the unique k >= 1 with n = 2^k (2j - 1), i.e. the
// number of trailing zero bits. Classes partition the even integers.
inline long block_class(long long n) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("block_class: n must be positive and even");
  long k = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++k;
  }
  return k;
}

enum class BuildMode { standard, p1 };

// Global construction parameters. margin is the headroom constant Gamma in
// the stride formula; c is the target growth constant.
struct BuildParams {
  double p = std::numeric_limits<double>::infinity();
  Rat c = 1;
  Rat margin = Rat(Int("10000000000"));
  BuildMode mode = BuildMode::standard;
  // p1 mode: per-class extra stride floor chosen by the scheduling search
  // (index k-1 for class k); classes beyond the vector use 1.
  std::vector<Int> p1_extra;

  void validate() const {
    if (mode == BuildMode::standard) {
      if (!(p > 1.0) && !std::isinf(p))
        throw std::invalid_argument("BuildParams: p must be in (1, inf]");
    }
    if (c <= 0 || margin <= 0)
      throw std::invalid_argument("BuildParams: c and margin must be positive");
  }

  double conjugate_exponent() const {
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
  }
};

namespace detail {

// floor(base^e) for rational base > 0 and real e >= 2, with a 50-digit
// binary-float evaluation when the exponent is fractional.
inline Int floor_pow(const Rat& base, double e) {
  if (base <= 0) return Int(0);
  if (e == 2.0) {
    Rat v = base * base;
    return rat_num(v) / rat_den(v);
  }
  using BF = boost::multiprecision::cpp_bin_float_50;
  BF b(rat_num(base).convert_to<BF>() / rat_den(base).convert_to<BF>());
  BF v = boost::multiprecision::pow(b, BF(e));
  return boost::multiprecision::floor(v).convert_to<Int>();
}

}  // namespace detail

// Stride alpha for a target pair: 1 + floor(max((margin * ell / c)^e,
// 2 deg + 8 ell)) with e = max(2, p'); in p1 mode the first operand is
// replaced by the scheduled per-class extra value.
inline Int stride_for(const TargetPair& t, const BuildParams& params,
                      long class_k = 0) {
  params.validate();
  Int gap_floor = Int(2) * t.poly.degree() + Int(8) * t.radius;
  Int head;
  if (params.mode == BuildMode::p1) {
    head = 1;
    if (class_k >= 1 && (std::size_t)class_k <= params.p1_extra.size())
      head = params.p1_extra[(std::size_t)class_k - 1];
  } else {
    double e = std::max(2.0, params.conjugate_exponent());
    head = detail::floor_pow(params.margin * t.radius / params.c, e);
  }
  return 1 + (head > gap_floor ? head : gap_floor);
}

// Source of per-class targets; nullopt marks a class with no target (its
// blocks stay empty).
class PairSource {
 public:
  virtual ~PairSource() = default;
  virtual std::optional<TargetPair> pair(long k) const = 0;
};

// Canonical enumeration of all admissible pairs ordered by height, then by
// (polynomial, radius). Generation is lazy and cached; heights are exhausted
// one at a time.
class DefaultEnumeration : public PairSource {
 public:
  std::optional<TargetPair> pair(long k) const override {
    if (k < 1) throw std::invalid_argument("DefaultEnumeration: k must be >= 1");
    std::lock_guard<std::mutex> lk(mu_);
    while (items_.size() < (std::size_t)k) extend_height();
    return items_[(std::size_t)k - 1];
  }

  // Number of pairs of height exactly h (forces generation).
  std::size_t count_at_height(long h) const {
    std::lock_guard<std::mutex> lk(mu_);
    while (height_done_ < h) extend_height();
    std::size_t c = 0;
    for (const auto& it : items_)
      if (it.height() == h) ++c;
    return c;
  }

 private:
  mutable std::mutex mu_;
  mutable std::vector<TargetPair> items_;
  mutable long height_done_ = 0;

  // All distinct rationals a/b with |a| <= h, 1 <= b <= h, sorted.
  static std::vector<Rat> value_set(long h) {
    std::vector<Rat> vals;
    for (long a = -h; a <= h; ++a)
      for (long b = 1; b <= h; ++b) vals.push_back(Rat(a, b));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
  }

  void extend_height() const {
    const long H = ++height_done_;
    std::vector<TargetPair> fresh;

    std::vector<Rat> vals = value_set(H);
    std::vector<RatC> cset;
    cset.reserve(vals.size() * vals.size());
    for (const Rat& re : vals)
      for (const Rat& im : vals) cset.push_back(RatC(re, im));
    std::sort(cset.begin(), cset.end(), ratc_less);

    // Zero polynomial: only the radius can realize height H.
    {
      TargetPair t;
      t.radius = H;
      fresh.push_back(t);
    }

    // Degree d polynomials over coefficients of height <= H, top nonzero.
    for (long d = 0; d + 1 <= H; ++d) {
      std::vector<std::size_t> idx((std::size_t)d + 1, 0);
      RationalPoly q;
      q.coeffs.resize((std::size_t)d + 1);
      bool done = false;
      while (!done) {
        for (std::size_t i = 0; i <= (std::size_t)d; ++i)
          q.coeffs[i] = cset[idx[i]];
        if (!q.coeffs.back().is_zero()) {
          Int ph = q.height();
          if (ph <= H) {
            // New pairs at height H: all radii if the polynomial itself is
            // new at H, otherwise only radius H.
            Int min_r = l1_ceil_min_radius(q.coeffs);
            long lo = (ph == H) ? (min_r > H ? H + 1 : (long)min_r.convert_to<long>()) : H;
            for (long r = lo; r <= H; ++r) {
              if (Int(r) < min_r) continue;
              TargetPair t;
              t.poly = q;
              t.radius = r;
              fresh.push_back(t);
            }
          }
        }
        // odometer
        std::size_t pos = 0;
        for (;; ++pos) {
          if (pos > (std::size_t)d) {
            done = true;
            break;
          }
          if (++idx[pos] < cset.size()) break;
          idx[pos] = 0;
        }
      }
    }

    std::sort(fresh.begin(), fresh.end(),
              [](const TargetPair& a, const TargetPair& b) {
                if (!(a.poly == b.poly)) return poly_less(a.poly, b.poly);
                return a.radius < b.radius;
              });
    items_.insert(items_.end(), fresh.begin(), fresh.end());
  }
};

// Fixed list of targets; classes past the end are inactive.
class OverrideList : public PairSource {
 public:
  explicit OverrideList(std::vector<TargetPair> pairs) : pairs_(std::move(pairs)) {
    for (const TargetPair& t : pairs_) {
      if (!pair_admissible(t))
        throw std::invalid_argument("OverrideList: inadmissible pair (radius below coefficient l1 norm)");
    }
  }

  std::optional<TargetPair> pair(long k) const override {
    if (k < 1) throw std::invalid_argument("OverrideList: k must be >= 1");
    if ((std::size_t)k > pairs_.size()) return std::nullopt;
    return pairs_[(std::size_t)k - 1];
  }

  std::size_t size() const { return pairs_.size(); }

 private:
  std::vector<TargetPair> pairs_;
};

// Text format, one pair per line:
//   degree  re_0 im_0 ... re_d im_d  ell
// with each entry a rational "a/b" or integer "a"; degree -1 denotes the
// zero polynomial (no coefficients). Blank lines and '#' comments allowed.
inline Rat parse_rational(const std::string& tok) {
  auto slash = tok.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(tok));
    Int n(tok.substr(0, slash));
    Int d(tok.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rat(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_rational: bad token '" + tok + "'");
  }
}

inline std::vector<TargetPair> parse_override_text(std::istream& in) {
  std::vector<TargetPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long d;
    if (!(ls >> d)) continue;  // blank
    if (d < -1 || d > 1000000)
      throw std::invalid_argument("override line " + std::to_string(lineno) + ": bad degree");
    TargetPair t;
    for (long long j = 0; j <= d; ++j) {
      std::string re, im;
      if (!(ls >> re >> im))
        throw std::invalid_argument("override line " + std::to_string(lineno) + ": missing coefficients");
      t.poly.coeffs.push_back(RatC(parse_rational(re), parse_rational(im)));
    }
    if (d >= 0 && t.poly.coeffs.back().is_zero())
      throw std::invalid_argument("override line " + std::to_string(lineno) + ": zero leading coefficient");
    if (!(ls >> t.radius))
      throw std::invalid_argument("override line " + std::to_string(lineno) + ": missing radius");
    std::string extra;
    if (ls >> extra)
      throw std::invalid_argument("override line " + std::to_string(lineno) + ": trailing tokens");
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<TargetPair> parse_override_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open override file: " + path);
  return parse_override_text(in);
}

}  // namespace maclane
