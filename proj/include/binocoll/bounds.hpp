#pragma once

// Explicit analytic estimates: Dusart's pi(x) bound, Robbins' Stirling
// bracket, the linear psi bound, the rate function h(alpha, lambda), the
// Stirling-derived log-binomial lower bounds, and the large-l thresholds.
//
// Each estimate is a template over the number type (Interval or HighPrec) so
// verdicts can be refined at 50 digits.  Constants are spelled as decimal
// literals and enclosed exactly.

#include <binocoll/interval.hpp>

#include <cstdint>
#include <stdexcept>

namespace binocoll {

// ---------------------------------------------------------------------------
// pi(x) < (x / log x)(1 + 1/log x + 2/log^2 x + 7.59/log^3 x),  x > 1

template <class R>
R pi_upper_dusart_t(const R& x) {
  const R L = log(x);
  const R L2 = L * L;
  return x / L * (num<R>(1) + num<R>(1) / L + num<R>(2) / L2 + dec<R>("7.59") / (L2 * L));
}

inline Interval pi_upper_dusart(double x) {
  if (!(x > 1.0)) throw std::invalid_argument("pi_upper_dusart: x must be > 1");
  return pi_upper_dusart_t(Interval::point(x));
}

// ---------------------------------------------------------------------------
// Robbins: g-(v) < v! < g+(v) for integers v > 1, in log form.

template <class R>
R log_stirling_core(const R& z) {
  return z * log(z) - z + log(num<R>(2) * NumTraits<R>::pi() * z) / num<R>(2);
}

template <class R>
R log_g_minus(const R& z) {
  return log_stirling_core(z) + num<R>(1) / (num<R>(12) * (z + num<R>(1)));
}

/// f(z) = log g+(z); accepts any real z > 0.
template <class R>
R log_g_plus(const R& z) {
  return log_stirling_core(z) + num<R>(1) / (num<R>(12) * z);
}

struct StirlingBounds {
  Interval log_lower;  // log g-(v)
  Interval log_upper;  // log g+(v)
  Interval f;          // f(v) = log g+(v)
};

inline StirlingBounds stirling_log_bounds(std::uint64_t nu) {
  if (nu < 2) throw std::invalid_argument("stirling_log_bounds: nu must be >= 2");
  const Interval z(static_cast<std::int64_t>(nu));
  const Interval upper = log_g_plus(z);
  return {log_g_minus(z), upper, upper};
}

inline Interval stirling_f(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("stirling_f: z must be > 0");
  return log_g_plus(Interval::point(z));
}

// ---------------------------------------------------------------------------
// psi(z) < 1.03883 z < z log 2.83

template <class R>
R psi_upper_linear_t(const R& z) {
  return dec<R>("1.03883") * z;
}

inline Interval psi_upper_linear(double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("psi_upper_linear: z must be >= 0");
  return psi_upper_linear_t(Interval::point(z));
}

/// 1.03883 < log 2.83.
inline Verdict psi_constant_check() {
  return decide([]<class R>() { return dec<R>("1.03883"); }, []<class R>() { return log(dec<R>("2.83")); },
                Relation::less);
}

// ---------------------------------------------------------------------------
// h(a, l) = 0.265(1 + log((1-a)/(0.265a))) + (0.265+l)(1 + log((1+0.735a)/(a(0.265+l))))

template <class R>
R h_rate_t(const R& alpha, const R& lambda) {
  const R c265 = dec<R>("0.265");
  const R one = num<R>(1);
  const R first = c265 * (one + log((one - alpha) / (c265 * alpha)));
  const R s = c265 + lambda;
  const R second = s * (one + log((one + dec<R>("0.735") * alpha) / (alpha * s)));
  return first + second;
}

inline Interval h_rate(double alpha, double lambda) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("h_rate: alpha must lie in (0, 1)");
  if (!(lambda >= 0.0)) throw std::invalid_argument("h_rate: lambda must be >= 0");
  return h_rate_t(Interval::point(alpha), Interval::point(lambda));
}

/// h(0.00151, 0) > 4.6623
inline Verdict h_rate_floor_check() {
  return decide([]<class R>() { return dec<R>("4.6623"); },
                []<class R>() { return h_rate_t(dec<R>("0.00151"), num<R>(0)); }, Relation::less);
}

// ---------------------------------------------------------------------------
// Lower bounds for log C(n-m-1, k-m) and log C(n+k+l, k+l-m0) at m = 0.735k,
// k = alpha n, l = lambda k.

inline constexpr double kAlphaMax = 0.00151;
inline constexpr double kLambdaMax = 0.00271;
inline constexpr std::int64_t kKMin = 588;
inline constexpr std::int64_t kNFloor = 500000;

/// 0.265 a n (1 + log((1-a)/(0.265a))) - log(a n)/2 - 0.2558
template <class R>
R log_binom_lower_first_t(const R& alpha, const R& n) {
  const R c265 = dec<R>("0.265");
  const R one = num<R>(1);
  return c265 * alpha * n * (one + log((one - alpha) / (c265 * alpha))) - log(alpha * n) / num<R>(2) -
         dec<R>("0.2558");
}

/// (0.265+l) a n (1 + log((1+0.735a)/((0.265+l)a))) + log(a/n)/2 - 1.5794
template <class R>
R log_binom_lower_second_t(const R& alpha, const R& lambda, const R& n) {
  const R s = dec<R>("0.265") + lambda;
  const R one = num<R>(1);
  return s * alpha * n * (one + log((one + dec<R>("0.735") * alpha) / (s * alpha))) + log(alpha / n) / num<R>(2) -
         dec<R>("1.5794");
}

struct LogBinomLowers {
  Interval eq42;  // bound on log C(n-m-1, k-m)
  Interval eq43;  // bound on log C(n+k+l, k+l-m0)
};

inline LogBinomLowers log_binom_lowers(double alpha, double lambda, std::int64_t n) {
  if (n < kNFloor) throw std::invalid_argument("log_binom_lowers: n must be >= 500000");
  if (!(alpha > 0.0 && alpha <= kAlphaMax)) throw std::invalid_argument("log_binom_lowers: alpha must be in (0, 0.00151]");
  if (!(lambda >= 0.0 && lambda <= kLambdaMax)) throw std::invalid_argument("log_binom_lowers: lambda must be in [0, 0.00271]");
  if (alpha * static_cast<double>(n) < static_cast<double>(kKMin) * (1 - 1e-12))
    throw std::invalid_argument("log_binom_lowers: k = alpha n must be >= 588");
  const Interval a = Interval::point(alpha), lam = Interval::point(lambda), nn(n);
  return {log_binom_lower_first_t(a, nn), log_binom_lower_second_t(a, lam, nn)};
}

// ---------------------------------------------------------------------------
// Large-l regime.

struct Section5Thresholds {
  Interval t_log2;  // n (1.3132 log^2(2n) - 2.00271)
  Interval t_pow;   // (c n / log n)^(40/21)
  Interval c_star;  // 1.3132 * 21/40
};

template <class R>
R threshold_log2_t(const R& n) {
  const R L = log(num<R>(2) * n);
  return n * (dec<R>("1.3132") * L * L - dec<R>("2.00271"));
}

template <class R>
R threshold_pow_t(const R& n, const R& c) {
  return pow(c * n / log(n), num<R>(40) / num<R>(21));
}

template <class R>
R c_star_t() {
  return dec<R>("1.3132") * num<R>(21) / num<R>(40);
}

inline Section5Thresholds section5_thresholds(std::int64_t n, double c) {
  if (n < kNFloor) throw std::invalid_argument("section5_thresholds: n must be >= 500000");
  if (!(c > 0.0)) throw std::invalid_argument("section5_thresholds: c must be positive");
  const Interval nn(n), cc = Interval::point(c);
  return {threshold_log2_t(nn), threshold_pow_t(nn, cc), c_star_t<Interval>()};
}

/// Interval (x, x(1 + 1/log^3 x)] asserted to contain a prime.
struct PrimeInterval {
  double lower_exclusive;
  Interval upper;  // enclosure of the right endpoint
};

inline constexpr double kDusartIntervalFloor = 500000.0;

template <class R>
R dusart_interval_upper_t(const R& x) {
  const R L = log(x);
  return x * (num<R>(1) + num<R>(1) / (L * L * L));
}

inline PrimeInterval dusart_interval(double x) {
  if (!(x >= kDusartIntervalFloor)) throw std::invalid_argument("dusart_interval: x below validity floor 500000");
  return {x, dusart_interval_upper_t(Interval::point(x))};
}

/// 1.3132 n - log(n)/2 - 0.5359, a lower bound for log C(2n, 0.735n).
template <class R>
R central_binom_lower_t(const R& n) {
  return dec<R>("1.3132") * n - log(n) / num<R>(2) - dec<R>("0.5359");
}

inline Interval central_binom_lower(std::int64_t n) {
  if (n < kNFloor) throw std::invalid_argument("central_binom_lower: n must be >= 500000");
  return central_binom_lower_t(Interval(n));
}

/// log((2/0.735)^2 / ((2/0.735) - 1)^1.265), the exponential rate behind 1.3132.
template <class R>
R central_binom_rate_t() {
  const R r = num<R>(2) / dec<R>("0.735");
  return num<R>(2) * log(r) - dec<R>("1.265") * log(r - num<R>(1));
}

inline Interval central_binom_rate() { return central_binom_rate_t<Interval>(); }

/// 1.3132 <= rate
inline Verdict central_binom_constant_check() {
  return decide([]<class R>() { return dec<R>("1.3132"); }, []<class R>() { return central_binom_rate_t<R>(); },
                Relation::less_equal);
}

}  // namespace binocoll
