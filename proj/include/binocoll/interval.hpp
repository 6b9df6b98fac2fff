#pragma once

// Outward-rounded binary64 intervals and three-valued verdicts.
//
// Every arithmetic result is widened past the rounded value so the exact real
// result stays inside [lo, hi].  Basic operations and sqrt are correctly
// rounded (one ulp of widening suffices); libm transcendentals are widened by
// kTranscendentalUlps.  Formulas are written as templates over a number type so
// the same expression can be re-evaluated in 50-digit MPFR when an interval
// comparison is too close to call.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace binocoll {

namespace bmp = boost::multiprecision;

/// 50 significant decimal digits, no expression templates so `auto` is safe.
using HighPrec = bmp::number<bmp::mpfr_float_backend<50>, bmp::et_off>;

namespace detail {

inline constexpr int kTranscendentalUlps = 4;

inline double down(double v, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, -std::numeric_limits<double>::infinity());
  return v;
}

inline double up(double v, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, std::numeric_limits<double>::infinity());
  return v;
}

}  // namespace detail

/// Closed interval [lo, hi] of binary64 values known to contain a real number.
class Interval {
 public:
  constexpr Interval() = default;
  /// Exact for |v| <= 2^53; widened otherwise.
  Interval(int v) : Interval(static_cast<std::int64_t>(v)) {}
  Interval(std::int64_t v) {
    const double d = static_cast<double>(v);
    if (std::abs(v) <= (std::int64_t{1} << 53)) {
      lo_ = hi_ = d;
    } else {
      lo_ = detail::down(d);
      hi_ = detail::up(d);
    }
  }
  Interval(std::uint64_t v) : Interval(static_cast<std::int64_t>(v)) {
    if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw std::out_of_range("Interval: integer too large");
  }

  static Interval point(double v) { return Interval(v, v); }

  /// Encloses the decimal literal `text`, which is generally not representable.
  static Interval decimal(const char* text) {
    const double d = std::strtod(text, nullptr);
    return Interval(detail::down(d), detail::up(d));
  }

  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::domain_error("Interval: invalid bounds");
  }

  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] double mid() const { return lo_ + (hi_ - lo_) / 2; }
  [[nodiscard]] double width() const { return hi_ - lo_; }
  [[nodiscard]] bool contains(double v) const { return lo_ <= v && v <= hi_; }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return {detail::down(a.lo_ + b.lo_), detail::up(a.hi_ + b.hi_)};
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return {detail::down(a.lo_ - b.hi_), detail::up(a.hi_ - b.lo_)};
  }
  friend Interval operator-(const Interval& a) { return {-a.hi_, -a.lo_}; }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const double p[] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    double lo = p[0], hi = p[0];
    for (double v : p) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {detail::down(lo), detail::up(hi)};
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo_ <= 0.0 && b.hi_ >= 0.0) throw std::domain_error("Interval: division by an interval containing 0");
    const double q[] = {a.lo_ / b.lo_, a.lo_ / b.hi_, a.hi_ / b.lo_, a.hi_ / b.hi_};
    double lo = q[0], hi = q[0];
    for (double v : q) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {detail::down(lo), detail::up(hi)};
  }
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }
  Interval& operator/=(const Interval& o) { return *this = *this / o; }

  friend Interval log(const Interval& a) {
    if (a.lo_ <= 0.0) throw std::domain_error("Interval: log of non-positive value");
    return {detail::down(std::log(a.lo_), detail::kTranscendentalUlps),
            detail::up(std::log(a.hi_), detail::kTranscendentalUlps)};
  }
  friend Interval exp(const Interval& a) {
    return {std::max(0.0, detail::down(std::exp(a.lo_), detail::kTranscendentalUlps)),
            detail::up(std::exp(a.hi_), detail::kTranscendentalUlps)};
  }
  friend Interval sqrt(const Interval& a) {
    if (a.lo_ < 0.0) throw std::domain_error("Interval: sqrt of negative value");
    return {std::max(0.0, detail::down(std::sqrt(a.lo_))), detail::up(std::sqrt(a.hi_))};
  }
  /// Positive base, exponent given as an enclosure.
  friend Interval pow(const Interval& base, const Interval& e) { return exp(e * log(base)); }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Uniform construction of constants across the number types used by the
/// templated formulas.
template <class Real>
struct NumTraits;

template <>
struct NumTraits<Interval> {
  static Interval decimal(const char* text) { return Interval::decimal(text); }
  static Interval integer(std::int64_t v) { return Interval(v); }
  static Interval exact(double v) { return Interval::point(v); }
  static Interval pi() { return Interval(detail::down(M_PI), detail::up(M_PI)); }
};

template <>
struct NumTraits<HighPrec> {
  static HighPrec decimal(const char* text) { return HighPrec(text); }
  static HighPrec integer(std::int64_t v) { return HighPrec(v); }
  static HighPrec exact(double v) { return HighPrec(v); }
  static HighPrec pi() { return boost::math::constants::pi<HighPrec>(); }
};

template <class Real>
Real dec(const char* text) {
  return NumTraits<Real>::decimal(text);
}

template <class Real>
Real num(std::int64_t v) {
  return NumTraits<Real>::integer(v);
}

/// The binary64 value `v` itself, as a number of type Real.
template <class Real>
Real from_double(double v) {
  return NumTraits<Real>::exact(v);
}

/// Encloses a HighPrec value; the width covers the 50-digit working precision.
inline Interval to_interval(const HighPrec& v) {
  const double d = v.convert_to<double>();
  const double slack = std::abs(d) * 1e-15 + 1e-300;
  return {detail::down(d - slack), detail::up(d + slack)};
}

enum class Truth { holds, fails, indeterminate };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::holds: return "HOLDS";
    case Truth::fails: return "FAILS";
    case Truth::indeterminate: return "INDETERMINATE";
  }
  return "?";
}

/// Outcome of a certified comparison.  `margin` is rhs - lhs (midpoint, or the
/// 50-digit value when `refined`).
struct Verdict {
  Truth truth = Truth::indeterminate;
  double margin = 0.0;
  bool refined = false;

  [[nodiscard]] bool holds() const { return truth == Truth::holds; }
  [[nodiscard]] bool fails() const { return truth == Truth::fails; }
};

enum class Relation { less, less_equal };

/// Decides `lhs REL rhs` from two enclosures only.
inline Verdict compare(const Interval& lhs, const Interval& rhs, Relation rel) {
  Verdict v;
  v.margin = rhs.mid() - lhs.mid();
  if (rel == Relation::less) {
    if (lhs.hi() < rhs.lo()) v.truth = Truth::holds;
    else if (lhs.lo() >= rhs.hi()) v.truth = Truth::fails;
  } else {
    if (lhs.hi() <= rhs.lo()) v.truth = Truth::holds;
    else if (lhs.lo() > rhs.hi()) v.truth = Truth::fails;
  }
  return v;
}

/// Certified comparison of two templated expressions.  `lhs` and `rhs` are
/// generic callables invoked once with Interval and, if the enclosures
/// overlap, again with HighPrec.
template <class Lhs, class Rhs>
Verdict decide(Lhs&& lhs, Rhs&& rhs, Relation rel) {
  Verdict v = compare(lhs.template operator()<Interval>(), rhs.template operator()<Interval>(), rel);
  if (v.truth != Truth::indeterminate) return v;

  const HighPrec l = lhs.template operator()<HighPrec>();
  const HighPrec r = rhs.template operator()<HighPrec>();
  const HighPrec m = r - l;
  const HighPrec scale = abs(l) + abs(r) + 1;
  v.refined = true;
  v.margin = m.convert_to<double>();
  if (abs(m) > scale * HighPrec("1e-40")) {
    const bool positive = m > 0;
    v.truth = positive ? Truth::holds : Truth::fails;
  } else if (rel == Relation::less_equal) {
    v.truth = Truth::indeterminate;
  }
  return v;
}

}  // namespace binocoll
