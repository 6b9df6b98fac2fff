#pragma once

// Executable checkers for the collision identities, the lemma inequalities
// and the two threshold computations (k + l <= 871155, n <= ~3e10).
//
// Index ranges follow the factorial-ratio derivation of C(2n+d, n-m) =
// C(2n+l, n-k):
//
//   prod_{i=m}^{k-1} (n-i) * prod_{i=d+1}^{l} (2n+i) = prod_{i=m+d+1}^{k+l} (n+i)
//
// The printed variant (first product over m+1..k) is evaluated alongside for
// traceability but never decides a verdict.

#include <binocoll/arith.hpp>
#include <binocoll/bounds.hpp>
#include <binocoll/collision.hpp>
#include <binocoll/interval.hpp>
#include <binocoll/sieve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace binocoll {

/// One evaluated inequality `lhs REL rhs`.
struct Inequality {
  std::string name;
  Interval lhs;
  Interval rhs;
  Relation relation = Relation::less;
  Verdict verdict;
  bool decisive = true;  // false: reported for traceability only
};

struct LemmaReport {
  std::string lemma;
  std::vector<std::pair<std::string, bool>> hypotheses;
  Interval lhs;
  Interval rhs;
  Verdict verdict;
  std::string notes;
  std::vector<Inequality> parts;

  [[nodiscard]] bool hypotheses_met() const {
    return std::all_of(hypotheses.begin(), hypotheses.end(), [](const auto& h) { return h.second; });
  }
};

namespace detail {

template <class Lhs, class Rhs>
Inequality evaluate(std::string name, Lhs&& lhs, Rhs&& rhs, Relation rel, bool decisive = true) {
  Inequality q;
  q.name = std::move(name);
  q.lhs = lhs.template operator()<Interval>();
  q.rhs = rhs.template operator()<Interval>();
  q.relation = rel;
  q.verdict = decide(lhs, rhs, rel);
  q.decisive = decisive;
  return q;
}

/// Combined truth of the decisive parts.
inline Verdict conjunction(const std::vector<Inequality>& parts) {
  Verdict out;
  out.truth = Truth::holds;
  bool first = true;
  for (const auto& p : parts) {
    if (!p.decisive) continue;
    if (first || p.verdict.margin < out.margin) out.margin = p.verdict.margin;
    first = false;
    out.refined = out.refined || p.verdict.refined;
    if (p.verdict.truth == Truth::fails) out.truth = Truth::fails;
    else if (p.verdict.truth == Truth::indeterminate && out.truth != Truth::fails) out.truth = Truth::indeterminate;
  }
  return out;
}

/// Applies the hypothesis gate: verdicts are only issued when every
/// hypothesis holds.
inline void gate(LemmaReport& r) {
  if (r.hypotheses_met()) return;
  r.verdict.truth = Truth::indeterminate;
  std::string violated;
  for (const auto& [name, ok] : r.hypotheses)
    if (!ok) violated += (violated.empty() ? "" : ", ") + name;
  r.notes = "hypotheses violated: " + violated + (r.notes.empty() ? "" : "; " + r.notes);
}

template <class R>
R from_big(const BigReal& v) {
  if constexpr (std::is_same_v<R, Interval>) {
    const double d = v.convert_to<double>();
    const double slack = std::abs(d) * 1e-15 + 1e-300;
    return {down(d - slack), up(d + slack)};
  } else {
    return R(v.str(60, std::ios_base::scientific));
  }
}

inline Natural product_range(std::int64_t from, std::int64_t to, std::int64_t offset, int sign) {
  Natural out = 1;
  for (std::int64_t i = from; i <= to; ++i) {
    const std::int64_t v = offset + sign * i;
    if (v <= 0) return 0;
    out *= static_cast<std::uint64_t>(v);
  }
  return out;
}

inline void require_identity_domain(const ParamTuple& t) {
  if (!(0 <= t.m && t.m < t.k && t.k <= t.n)) throw std::invalid_argument("identity check: need 0 <= m < k <= n");
  if (t.l < t.delta) throw std::invalid_argument("identity check: need l >= delta");
  if (t.delta != 0 && t.delta != 1) throw std::invalid_argument("identity check: delta must be 0 or 1");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Product and ratio identities

/// prod_{i=m}^{k-1}(n-i) * prod_{i=d+1}^{l}(2n+i) == prod_{i=m+d+1}^{k+l}(n+i)
inline bool product_identity_check(const ParamTuple& t) {
  detail::require_identity_domain(t);
  const Natural lhs = detail::product_range(t.m, t.k - 1, t.n, -1) *
                      detail::product_range(t.delta + 1, t.l, 2 * t.n, +1);
  return lhs == detail::product_range(t.m + t.delta + 1, t.k + t.l, t.n, +1);
}

/// Same identity with the first product over m+1..k, as printed.
inline bool product_identity_printed(const ParamTuple& t) {
  detail::require_identity_domain(t);
  const Natural lhs = detail::product_range(t.m + 1, t.k, t.n, -1) *
                      detail::product_range(t.delta + 1, t.l, 2 * t.n, +1);
  return lhs == detail::product_range(t.m + t.delta + 1, t.k + t.l, t.n, +1);
}

/// prod_{i=1}^{l-d} (2n+d+i)/(n+k+d+i) == prod_{j=1}^{k-m} (n+d+m+j)/(n-k+j+shift)
/// with shift = 0 (derived) or -1 (printed), compared by cross-multiplication.
inline bool ratio_identity_check(const ParamTuple& t, bool printed = false) {
  detail::require_identity_domain(t);
  const std::int64_t shift = printed ? -1 : 0;
  const Natural num_l = detail::product_range(1, t.l - t.delta, 2 * t.n + t.delta, +1);
  const Natural den_l = detail::product_range(1, t.l - t.delta, t.n + t.k + t.delta, +1);
  const Natural num_r = detail::product_range(1, t.k - t.m, t.n + t.delta + t.m, +1);
  const Natural den_r = detail::product_range(1, t.k - t.m, t.n - t.k + shift, +1);
  if (den_l == 0 || den_r == 0) return false;
  return num_l * den_r == num_r * den_l;
}

// ---------------------------------------------------------------------------
// Inequalities from the ratio identity

inline LemmaReport check_lemma21(const ParamTuple& t) {
  LemmaReport r;
  r.lemma = "lemma21";
  const Hypotheses h = t.hypotheses();
  const bool eq12 = check_eq12(t);
  r.hypotheses = {{"eq12", eq12}, {"0<=m<k<n/2", h.order}, {"l>delta", h.l_gt_delta}};

  const std::int64_t d = t.delta, n = t.n, m = t.m, k = t.k, l = t.l;
  if (n - k <= 0 || n + k <= 0 || 2 * n + l <= 0 || n + k + l <= 0) {
    r.notes = "tuple outside the domain of the inequalities";
    detail::gate(r);
    return r;
  }
  r.parts.push_back(detail::evaluate(
      "upper: (l-d)log((2n+l)/(n+k+l)) < (k-m)(k+m+d+1)/(n-k)",
      [&]<class R>() { return num<R>(l - d) * log(num<R>(2 * n + l) / num<R>(n + k + l)); },
      [&]<class R>() { return num<R>((k - m) * (k + m + d + 1)) / num<R>(n - k); }, Relation::less));
  r.parts.push_back(detail::evaluate(
      "lower: (k-m)(k+m+d)/(n+k+d) < (l-d)log(2n/(n+k))",
      [&]<class R>() { return num<R>((k - m) * (k + m + d)) / num<R>(n + k + d); },
      [&]<class R>() { return num<R>(l - d) * log(num<R>(2 * n) / num<R>(n + k)); }, Relation::less));
  r.parts.push_back(detail::evaluate(
      "lower, printed index: (k-m)(k+m+d+1)/(n+k+d) < (l-d)log(2n/(n+k))",
      [&]<class R>() { return num<R>((k - m) * (k + m + d + 1)) / num<R>(n + k + d); },
      [&]<class R>() { return num<R>(l - d) * log(num<R>(2 * n) / num<R>(n + k)); }, Relation::less, false));
  r.lhs = r.parts[0].lhs;
  r.rhs = r.parts[0].rhs;
  r.verdict = detail::conjunction(r.parts);
  r.notes = "lower bound decided with (k+m+d); the (k+m+d+1) variant is reported only";
  detail::gate(r);
  return r;
}

/// Conclusions 588 <= k < 0.00151n and l < 0.00271k as exact predicates.
struct Lemma22Conclusions {
  bool k_at_least_588 = false;
  bool k_below_alpha_n = false;
  bool l_below_lambda_k = false;
};

inline Lemma22Conclusions lemma22_conclusions(const ParamTuple& t) {
  return {t.k >= 588, 100000 * t.k < 151 * t.n, 100000 * t.l < 271 * t.k};
}

/// k^2 / ((n-k) log(2.001/(1.001 + k/n))) < 1 certifies that k forces l = delta.
inline LemmaReport check_lemma22(std::int64_t n, std::int64_t k) {
  LemmaReport r;
  r.lemma = "lemma22";
  r.hypotheses = {{"n>=500000", n >= kNFloor}, {"0<k<n", 0 < k && k < n}};
  if (!(0 < k && k < n)) {
    r.notes = "k outside (0, n)";
    detail::gate(r);
    return r;
  }
  r.parts.push_back(detail::evaluate(
      "k^2/((n-k)log(2.001/(1.001+k/n))) < 1",
      [&]<class R>() {
        const R nn = num<R>(n), kk = num<R>(k);
        return kk * kk / ((nn - kk) * log(dec<R>("2.001") / (dec<R>("1.001") + kk / nn)));
      },
      [&]<class R>() { return num<R>(1); }, Relation::less));
  r.lhs = r.parts[0].lhs;
  r.rhs = r.parts[0].rhs;
  r.verdict = r.parts[0].verdict;
  r.notes = r.verdict.holds() ? "k forces l = delta" : "no force at this k";
  detail::gate(r);
  return r;
}

// ---------------------------------------------------------------------------
// Smoothness of the two windows

/// Window of integers n - i (below) or n + i (above) for i in [first, last].
struct IndexWindow {
  enum class Side { below, above } side;
  std::int64_t first = 0;
  std::int64_t last = -1;

  [[nodiscard]] bool empty() const { return last < first; }
};

/// S1 = {n-i : m <= i <= k-1}; printed variant {n-i : m+1 <= i <= k}.
inline IndexWindow window_s1(const ParamTuple& t, bool printed = false) {
  return printed ? IndexWindow{IndexWindow::Side::below, t.m + 1, t.k}
                 : IndexWindow{IndexWindow::Side::below, t.m, t.k - 1};
}

/// S2 = {n+i : m0+1 <= i <= k+l}
inline IndexWindow window_s2(const ParamTuple& t) {
  return {IndexWindow::Side::above, t.m0() + 1, t.k + t.l};
}

/// Largest prime factor over a window's elements (1 for an empty window or
/// elements equal to 1).
inline std::uint64_t window_largest_prime(const ParamTuple& t, const IndexWindow& w, std::uint32_t bound) {
  std::uint64_t worst = 1;
  for (std::int64_t i = w.first; i <= w.last; ++i) {
    const std::int64_t v = w.side == IndexWindow::Side::below ? t.n - i : t.n + i;
    if (v <= 0) throw std::invalid_argument("window element is not positive");
    if (v < 2) continue;
    const auto split = smooth_split<std::uint64_t>(static_cast<std::uint64_t>(v), bound);
    std::uint64_t p = split.factors.empty() ? 1 : split.factors.back().first;
    if (!split.is_smooth()) p = largest_prime_factor<std::uint64_t>(split.cofactor);
    worst = std::max(worst, p);
  }
  return worst;
}

inline LemmaReport check_lemma23_smooth(const ParamTuple& t) {
  LemmaReport r;
  r.lemma = "lemma23";
  const bool eq12 = check_eq12(t);
  r.hypotheses = {{"eq12", eq12}, {"0<=m<k", 0 <= t.m && t.m < t.k}, {"l>delta", t.l > t.delta}};
  const std::int64_t k0 = t.k0();
  if (k0 < 2 || t.k > t.n) {
    r.notes = "tuple outside the smoothness domain";
    detail::gate(r);
    return r;
  }
  const auto bound = static_cast<std::uint32_t>(k0);
  const auto bound_iv = Interval(k0);
  auto smooth_part = [&](const char* name, const IndexWindow& w, bool decisive) {
    const std::uint64_t worst = window_largest_prime(t, w, bound);
    Inequality q;
    q.name = name;
    q.lhs = Interval(static_cast<std::int64_t>(worst));
    q.rhs = bound_iv;
    q.relation = Relation::less_equal;
    q.verdict = compare(q.lhs, q.rhs, Relation::less_equal);
    q.decisive = decisive;
    return q;
  };
  r.parts.push_back(smooth_part("P(S1) <= k0", window_s1(t), true));
  r.parts.push_back(smooth_part("P(S2) <= k0", window_s2(t), true));
  r.parts.push_back(smooth_part("P(S1 printed) <= k0", window_s1(t, true), false));
  r.lhs = Interval(std::max(r.parts[0].lhs.hi(), r.parts[1].lhs.hi()), std::max(r.parts[0].lhs.hi(), r.parts[1].lhs.hi()));
  r.rhs = bound_iv;
  r.verdict = detail::conjunction(r.parts);
  r.notes = "k0=" + std::to_string(k0) + ", m0=" + std::to_string(t.m0());
  detail::gate(r);
  return r;
}

// ---------------------------------------------------------------------------
// Valuation inequality
//
// (n-k)^(2k+l-m-m0-pi(k0)) <= (2k+l)^pi(k0) (k-m)! (l+k-m0)!

enum class PiMode { exact, dusart };

inline const char* to_string(PiMode m) { return m == PiMode::exact ? "exact" : "dusart"; }

inline LemmaReport check_lemma31(const ParamTuple& t, PiMode mode) {
  LemmaReport r;
  r.lemma = "lemma31";
  const bool eq12 = check_eq12(t);
  r.hypotheses = {{"eq12", eq12}, {"0<=m<k", 0 <= t.m && t.m < t.k}};
  const std::int64_t k = t.k, l = t.l, m = t.m, m0 = t.m0(), k0 = t.k0();
  if (t.n - k < 1 || k - m < 0 || l + k - m0 < 0 || 2 * k + l < 1) {
    r.notes = "tuple outside the domain of the inequality";
    detail::gate(r);
    return r;
  }
  const std::uint64_t pi_exact = prime_count(static_cast<std::uint64_t>(std::max<std::int64_t>(k0, 0)));
  const bool use_dusart = mode == PiMode::dusart && k0 >= 2;
  auto pi_of = [&]<class R>() {
    return use_dusart ? pi_upper_dusart_t(num<R>(k0)) : num<R>(static_cast<std::int64_t>(pi_exact));
  };
  const BigReal lf1 = log_factorial_exact(static_cast<std::uint64_t>(k - m), 60);
  const BigReal lf2 = log_factorial_exact(static_cast<std::uint64_t>(l + k - m0), 60);
  r.parts.push_back(detail::evaluate(
      "exponent*log(n-k) <= pi*log(2k+l) + log((k-m)!) + log((l+k-m0)!)",
      [&]<class R>() {
        const R exponent = num<R>(2 * k + l - m - m0) - pi_of.template operator()<R>();
        return exponent * log(num<R>(t.n - k));
      },
      [&]<class R>() {
        return pi_of.template operator()<R>() * log(num<R>(2 * k + l)) + detail::from_big<R>(lf1) +
               detail::from_big<R>(lf2);
      },
      Relation::less_equal));
  r.lhs = r.parts[0].lhs;
  r.rhs = r.parts[0].rhs;
  r.verdict = r.parts[0].verdict;
  r.notes = std::string("pi_mode=") + to_string(mode) + ", k0=" + std::to_string(k0) +
            ", pi(k0)=" + std::to_string(pi_exact);
  detail::gate(r);
  return r;
}

// ---------------------------------------------------------------------------
// k + l threshold
//
// E(F) = pi(2F) log(2F-1) + f(0.265(F-1)) + f(F-0.735(F-1))
//        - (0.53(F-1) - pi(2F)) log((2F-2)^{3/2} - 2F + 1)
// with pi replaced by Dusart's upper bound and f = log g+.

template <class R>
R lemma32_expression_t(std::int64_t F) {
  const R f = num<R>(F);
  const R fm1 = num<R>(F - 1);
  const R pi2f = pi_upper_dusart_t(num<R>(2 * F));
  const R base = num<R>(2 * F - 2);
  const R window = base * sqrt(base) - num<R>(2 * F) + num<R>(1);
  return pi2f * log(num<R>(2 * F - 1)) + log_g_plus(dec<R>("0.265") * fm1) +
         log_g_plus(f - dec<R>("0.735") * fm1) - (dec<R>("0.53") * fm1 - pi2f) * log(window);
}

inline Interval lemma32_expression(std::int64_t F) {
  if (F < 3) throw std::invalid_argument("lemma32_expression: F must be >= 3");
  return lemma32_expression_t<Interval>(F);
}

/// Certified sign: HOLDS iff E(F) >= 0.
inline Verdict lemma32_nonnegative(std::int64_t F) {
  return decide([]<class R>() { return num<R>(0); }, [F]<class R>() { return lemma32_expression_t<R>(F); },
                Relation::less_equal);
}

struct ThresholdResult {
  std::int64_t f_star = 0;     // largest F with E(F) >= 0
  Interval value_at_star;      // E(F*)
  Interval value_after_star;   // E(F*+1)
  int bisection_steps = 0;
};

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ThresholdResult threshold_lemma32(std::int64_t lo = 10'000, std::int64_t hi = 10'000'000) {
  const Verdict at_lo = lemma32_nonnegative(lo);
  const Verdict at_hi = lemma32_nonnegative(hi);
  if (!at_lo.holds() || !at_hi.fails()) throw NoSignChange("threshold_lemma32: no verified sign change in range");
  ThresholdResult out;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    const Verdict v = lemma32_nonnegative(mid);
    if (v.truth == Truth::indeterminate) throw NoSignChange("threshold_lemma32: undecidable sign at F=" + std::to_string(mid));
    (v.holds() ? lo : hi) = mid;
    ++out.bisection_steps;
  }
  out.f_star = lo;
  out.value_at_star = lemma32_expression(lo);
  out.value_after_star = lemma32_expression(lo + 1);
  return out;
}

// ---------------------------------------------------------------------------
// n bound from the valuation inequality
//
// log(n-k) <= [pi(k0) log(2k+l) + f(k-m) + f(l+k-m0)] / (2k+l-m-m0-pi(k0))
// at m = 0.735k, m0 = m+1, l in [1, 0.00271k].

inline constexpr std::uint64_t kReferenceNMax = 31754673611ull;

struct NmaxConfig {
  std::int64_t k_min = 588;
  std::int64_t k_dense_max = 5000;   // every k in [k_min, k_dense_max]
  std::int64_t k_max = 871155;
  std::int64_t k_stride = 97;        // sparse stride above k_dense_max
  int delta = 0;
  PiMode pi_mode = PiMode::dusart;
  unsigned threads = 1;
};

struct NmaxResult {
  Interval log_bound;            // max of the right-hand side
  std::uint64_t n_max = 0;       // floor(exp(log_bound.hi)) + k at the argmax
  std::int64_t k = 0, l = 0;     // argmax
  std::uint64_t points = 0;
  std::uint64_t skipped = 0;     // nonpositive denominator
  std::uint64_t reference_value = kReferenceNMax;
};

class EmptyGrid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::int64_t> nmax_k_grid(const NmaxConfig& cfg) {
  std::vector<std::int64_t> ks;
  for (std::int64_t k = cfg.k_min; k <= std::min(cfg.k_dense_max, cfg.k_max); ++k) ks.push_back(k);
  for (std::int64_t k = cfg.k_dense_max + cfg.k_stride; k <= cfg.k_max; k += cfg.k_stride) ks.push_back(k);
  if (ks.empty() || ks.back() != cfg.k_max) ks.push_back(cfg.k_max);
  return ks;
}

inline std::optional<Interval> nmax_point(std::int64_t k, std::int64_t l, int delta, PiMode mode,
                                          const std::vector<std::uint32_t>* pi_table) {
  const std::int64_t k0 = 2 * (k + l) - delta - 1;
  const Interval kk(k), ll(l);
  const Interval m = dec<Interval>("0.735") * kk;
  const Interval m0 = m + Interval(1);
  const Interval pi = mode == PiMode::dusart ? pi_upper_dusart_t(Interval(k0))
                                             : Interval(static_cast<std::int64_t>((*pi_table)[k0]));
  const Interval den = Interval(2 * k + l) - m - m0 - pi;
  if (den.lo() <= 0.0) return std::nullopt;
  const Interval numer = pi * log(Interval(2 * k + l)) + log_g_plus(kk - m) + log_g_plus(ll + kk - m0);
  return numer / den;
}

inline NmaxResult nmax_lemma31(const NmaxConfig& cfg = {}) {
  const auto ks = nmax_k_grid(cfg);
  std::vector<std::uint32_t> pi_table;
  if (cfg.pi_mode == PiMode::exact) {
    const std::int64_t kmax = ks.back();
    const auto top = static_cast<std::uint32_t>(2 * (kmax + kmax * 271 / 100000 + 1));
    pi_table.assign(top + 1, 0);
    for (std::uint32_t p : primes_up_to(top)) pi_table[p] = 1;
    for (std::size_t i = 1; i < pi_table.size(); ++i) pi_table[i] += pi_table[i - 1];
  }

  struct Best {
    bool found = false;
    Interval value;
    std::int64_t k = 0, l = 0;
    std::uint64_t points = 0, skipped = 0;
  };
  // Larger midpoint wins; ties go to the lexicographically smaller (k, l).
  auto better = [](const Interval& v, std::int64_t k, std::int64_t l, const Best& b) {
    if (!b.found) return true;
    if (v.mid() != b.value.mid()) return v.mid() > b.value.mid();
    return std::pair(k, l) < std::pair(b.k, b.l);
  };
  auto run = [&](std::size_t from, std::size_t to, Best& best) {
    for (std::size_t i = from; i < to; ++i) {
      const std::int64_t k = ks[i];
      const std::int64_t l_max = std::max<std::int64_t>(1, k * 271 / 100000);
      for (std::int64_t l = 1; l <= l_max; ++l) {
        ++best.points;
        const auto v = nmax_point(k, l, cfg.delta, cfg.pi_mode, &pi_table);
        if (!v) {
          ++best.skipped;
          continue;
        }
        if (better(*v, k, l, best)) best = {true, *v, k, l, best.points, best.skipped};
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(cfg.threads), static_cast<unsigned>(ks.size())));
  std::vector<Best> partial(workers);
  std::vector<std::thread> pool;
  const std::size_t chunk = (ks.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t from = std::min(ks.size(), w * chunk), to = std::min(ks.size(), from + chunk);
    if (workers == 1) run(from, to, partial[w]);
    else pool.emplace_back([&, from, to, w] { run(from, to, partial[w]); });
  }
  for (auto& t : pool) t.join();

  Best total;
  for (const Best& b : partial) {
    total.points += b.points;
    total.skipped += b.skipped;
    if (b.found && better(b.value, b.k, b.l, total)) {
      total.found = true;
      total.value = b.value;
      total.k = b.k;
      total.l = b.l;
    }
  }
  if (!total.found) throw EmptyGrid("nmax_lemma31: every grid point had a nonpositive denominator");
  NmaxResult out;
  out.log_bound = total.value;
  out.k = total.k;
  out.l = total.l;
  out.points = total.points;
  out.skipped = total.skipped;
  out.n_max = static_cast<std::uint64_t>(std::floor(exp(total.value).hi())) + static_cast<std::uint64_t>(total.k);
  return out;
}

// ---------------------------------------------------------------------------
// Small-window case: upper bound (2.83)^{k0 + 3 k0^{3/4}} against the
// Stirling lower bound 4.6623k - 2.879 - log k.

template <class R>
R section4_upper_t(std::int64_t k0) {
  const R kk = num<R>(k0);
  return (kk + num<R>(3) * sqrt(kk * sqrt(kk))) * log(dec<R>("2.83"));
}

template <class R>
R section4_lower_t(std::int64_t k) {
  return dec<R>("4.6623") * num<R>(k) - dec<R>("2.879") - log(num<R>(k));
}

inline LemmaReport section4_check(const ParamTuple& t) {
  LemmaReport r;
  r.lemma = "section4";
  const Hypotheses h = t.hypotheses();
  const std::int64_t n = t.n, m = t.m, k = t.k, l = t.l, m0 = t.m0(), k0 = t.k0();
  const bool small_window =
      k0 > 0 && static_cast<unsigned __int128>(n + k + l) * static_cast<unsigned __int128>(n + k + l) <=
                    static_cast<unsigned __int128>(k0) * static_cast<unsigned __int128>(k0) *
                        static_cast<unsigned __int128>(k0);
  r.hypotheses = {{"0<=m<k<n/2", h.order},     {"m<=0.735k", h.m_ratio},
                  {"l>delta", h.l_gt_delta},   {"l<0.001n", 1000 * l < n},
                  {"n>=500000", h.n_large},    {"n+k+l<=k0^(3/2)", small_window}};
  if (!(0 <= m && m < k && k < n && k0 >= 2 && l + k - m0 >= 0)) {
    r.notes = "tuple outside the domain of the bounds";
    detail::gate(r);
    return r;
  }
  const BigReal exact = log_binomial_exact(static_cast<std::uint64_t>(n - m - 1), k - m, 40) +
                        log_binomial_exact(static_cast<std::uint64_t>(n + k + l), l + k - m0, 40);
  const Interval exact_iv = detail::from_big<Interval>(exact);

  r.parts.push_back(detail::evaluate("4.6623k-2.879-log k <= (k0+3k0^(3/4))log 2.83",
                                     [&]<class R>() { return section4_lower_t<R>(k); },
                                     [&]<class R>() { return section4_upper_t<R>(k0); }, Relation::less_equal));
  r.parts.push_back(detail::evaluate(
      "log(C(n-m-1,k-m)C(n+k+l,l+k-m0)) <= (k0+3k0^(3/4))log 2.83",
      [&]<class R>() { return detail::from_big<R>(exact); }, [&]<class R>() { return section4_upper_t<R>(k0); },
      Relation::less_equal, false));
  r.parts.push_back(detail::evaluate("4.6623k-2.879-log k < log(C(n-m-1,k-m)C(n+k+l,l+k-m0))",
                                     [&]<class R>() { return section4_lower_t<R>(k); },
                                     [&]<class R>() { return detail::from_big<R>(exact); }, Relation::less, false));
  r.lhs = r.parts[0].lhs;
  r.rhs = r.parts[0].rhs;
  r.verdict = r.parts[0].verdict;
  r.notes = "exact log-product " + std::to_string(exact_iv.mid()) +
            "; FAILS means the two bounds are incompatible (no solution); second binomial uses l+k-m0";
  detail::gate(r);
  return r;
}

struct Section4Contradiction {
  Interval lhs;  // 4.6623k - 1.8344 - log k
  Interval rhs;  // 1.0433k + 3.13k^{3/4}
  bool contradiction = false;
  Verdict verdict;  // rhs < lhs
};

template <class R>
R section4_final_lhs_t(std::int64_t k) {
  return dec<R>("4.6623") * num<R>(k) - dec<R>("1.8344") - log(num<R>(k));
}

template <class R>
R section4_final_rhs_t(std::int64_t k) {
  const R kk = num<R>(k);
  return dec<R>("1.0433") * kk + dec<R>("3.13") * sqrt(kk * sqrt(kk));
}

inline Section4Contradiction section4_contradiction(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("section4_contradiction: k must be >= 1");
  Section4Contradiction out;
  out.lhs = section4_final_lhs_t<Interval>(k);
  out.rhs = section4_final_rhs_t<Interval>(k);
  out.verdict = decide([k]<class R>() { return section4_final_rhs_t<R>(k); },
                       [k]<class R>() { return section4_final_lhs_t<R>(k); }, Relation::less);
  out.contradiction = out.verdict.holds();
  return out;
}

// ---------------------------------------------------------------------------
// Large-l regime consistency

struct Section5Report {
  Section5Thresholds thresholds;
  Interval l0;         // (c n / log n)^{40/21}
  Interval lhs;        // (2n + l0)^{21/40} log(2n + l0)
  Interval rhs;        // 1.3132n - log(n)/2 - 0.5359
  Verdict verdict;     // lhs < rhs: any solution needs l > l0
  std::vector<std::pair<std::string, bool>> hypotheses;
};

template <class R>
R section5_lhs_t(std::int64_t n, const R& c) {
  const R two_n_l0 = num<R>(2 * n) + threshold_pow_t(num<R>(n), c);
  return pow(two_n_l0, num<R>(21) / num<R>(40)) * log(two_n_l0);
}

inline Section5Report section5_check(std::int64_t n, double c) {
  Section5Report r;
  r.hypotheses = {{"n>=500000", n >= kNFloor}, {"0<c<0.68943", c > 0.0 && c < 0.68943}};
  if (n < kNFloor || !(c > 0.0)) throw std::invalid_argument("section5_check: need n >= 500000 and c > 0");
  r.thresholds = section5_thresholds(n, c);
  r.l0 = r.thresholds.t_pow;
  r.lhs = section5_lhs_t(n, Interval::point(c));
  r.rhs = central_binom_lower_t(Interval(n));
  r.verdict = decide([&]<class R>() { return section5_lhs_t(n, from_double<R>(c)); },
                     [&]<class R>() { return central_binom_lower_t(num<R>(n)); }, Relation::less);
  if (!(c < 0.68943)) r.verdict.truth = Truth::indeterminate;
  return r;
}

}  // namespace binocoll
