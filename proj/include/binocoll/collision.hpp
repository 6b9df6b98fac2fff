#pragma once

// Binomial collisions C(x, a) = C(y, b): enumeration below a value bound, the
// Fibonacci family, and the (delta, n, m, k, l) coordinates with
// y = 2n + delta, x = 2n + l, b = n - m, a = n - k.

#include <binocoll/arith.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace binocoll {

/// Canonical position (x, a) with 2 <= a <= x/2.
struct Representation {
  std::uint64_t x = 0;
  std::uint64_t a = 0;

  friend auto operator<=>(const Representation&, const Representation&) = default;
};

struct CollisionRecord {
  Natural value;
  std::vector<Representation> reps;  // descending x
};

/// Every N <= v_max with at least two canonical representations, sorted by N.
///
/// Rows a >= 3 are tabulated exactly; each tabulated value is then tested for
/// an a = 2 representation by solving x(x-1)/2 = N.  Two a = 2 positions can
/// never share a value, so every collision has a representation with a >= 3.
inline std::vector<CollisionRecord> enumerate_collisions(const Natural& v_max) {
  std::map<Natural, std::vector<Representation>> index;
  for (std::uint64_t a = 3;; ++a) {
    Natural value = binomial(2 * a, static_cast<std::int64_t>(a));
    if (value > v_max) break;
    for (std::uint64_t x = 2 * a; value <= v_max; ++x) {
      index[value].push_back({x, a});
      value = value * (x + 1) / (x + 1 - a);
    }
  }
  std::vector<CollisionRecord> out;
  for (auto& [value, reps] : index) {
    const Natural disc = 8 * value + 1;
    const Natural root = bmp::sqrt(disc);
    if (root * root == disc) {
      const Natural x = (root + 1) / 2;
      if (x >= 4) reps.push_back({x.convert_to<std::uint64_t>(), 2});
    }
    if (reps.size() < 2) continue;
    std::sort(reps.begin(), reps.end(), [](const Representation& l, const Representation& r) { return l.x > r.x; });
    out.push_back({value, std::move(reps)});
  }
  return out;
}

/// C(F_{2i+2}F_{2i+3}, F_{2i}F_{2i+3}) = C(F_{2i+2}F_{2i+3} - 1, F_{2i}F_{2i+3} + 1)
struct FibIdentity {
  Natural x, a, y, b;
  bool verified = false;
};

inline FibIdentity fib_identity(std::uint64_t i) {
  FibIdentity f;
  const Natural f3 = fibonacci(2 * i + 3);
  f.x = fibonacci(2 * i + 2) * f3;
  f.a = fibonacci(2 * i) * f3;
  f.y = f.x - 1;
  f.b = f.a + 1;
  const auto limit = std::numeric_limits<unsigned long>::max();
  if (f.x > limit) throw CapabilityError("fib_identity: x exceeds machine-word binomial range");
  const auto x = f.x.convert_to<std::uint64_t>(), a = f.a.convert_to<std::uint64_t>();
  f.verified = binomial(x, static_cast<std::int64_t>(a)) == binomial(x - 1, static_cast<std::int64_t>(a + 1));
  return f;
}

/// Pure predicates of a ParamTuple's fields.
struct Hypotheses {
  bool order = false;        // 0 <= m < k < n/2
  bool m_ratio = false;      // m <= 0.735k
  bool l_gt_delta = false;   // l > delta
  bool n_large = false;      // n >= 500000
};

struct ParamTuple {
  int delta = 0;
  std::int64_t n = 0, m = 0, k = 0, l = 0;

  [[nodiscard]] std::int64_t k0() const { return 2 * (k + l) - delta - 1; }
  [[nodiscard]] std::int64_t m0() const { return std::max<std::int64_t>(m + delta, l / 2); }

  [[nodiscard]] Hypotheses hypotheses() const {
    return {0 <= m && m < k && 2 * k < n, 1000 * m <= 735 * k, l > delta, n >= 500000};
  }

  friend bool operator==(const ParamTuple&, const ParamTuple&) = default;
};

/// Coordinates of C(x, a) = C(y, b) with x > y.
inline ParamTuple to_param(std::int64_t x, std::int64_t a, std::int64_t y, std::int64_t b) {
  if (x <= y) throw std::invalid_argument("to_param: need x > y");
  if (y < 0 || a < 0 || b < 0) throw std::invalid_argument("to_param: negative argument");
  ParamTuple t;
  t.delta = static_cast<int>(y % 2);
  t.n = (y - t.delta) / 2;
  t.m = t.n - b;
  t.k = t.n - a;
  t.l = x - 2 * t.n;
  return t;
}

struct Positions {
  std::int64_t x, a, y, b;
  friend bool operator==(const Positions&, const Positions&) = default;
};

inline Positions from_param(const ParamTuple& t) {
  return {2 * t.n + t.l, t.n - t.k, 2 * t.n + t.delta, t.n - t.m};
}

/// C(2n + delta, n - m) == C(2n + l, n - k), exactly.
inline bool check_eq12(const ParamTuple& t) {
  if (t.n < 0 || 2 * t.n + t.delta < 0 || 2 * t.n + t.l < 0) return false;
  return binomial(static_cast<std::uint64_t>(2 * t.n + t.delta), t.n - t.m) ==
         binomial(static_cast<std::uint64_t>(2 * t.n + t.l), t.n - t.k);
}

}  // namespace binocoll
