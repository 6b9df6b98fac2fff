#pragma once

// Exact integer arithmetic: binomials, Fibonacci numbers, smoothness splits,
// largest prime factors, factorial valuations and high-precision log n!.

#include <binocoll/primes.hpp>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <gmp.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace binocoll {

namespace bmp = boost::multiprecision;

/// Arbitrary-precision nonnegative integer.
using Natural = bmp::mpz_int;
using u128 = unsigned __int128;

/// Raised when an input is beyond what trial division plus a primality test
/// can settle.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// C(x, r); zero outside 0 <= r <= x.
inline Natural binomial(std::uint64_t x, std::int64_t r) {
  if (r < 0 || static_cast<std::uint64_t>(r) > x) return 0;
  Natural out;
  mpz_bin_uiui(out.backend().data(), x, static_cast<unsigned long>(r));
  return out;
}

inline Natural fibonacci(std::uint64_t i) {
  Natural a = 0, b = 1;
  for (std::uint64_t j = 0; j < i; ++j) {
    Natural t = a + b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline bool is_prime(const Natural& n) {
  if (n < 2) return false;
  if (n <= std::numeric_limits<std::uint64_t>::max()) return is_prime(n.convert_to<std::uint64_t>());
  // BPSW followed by Miller-Rabin rounds.
  return mpz_probab_prime_p(n.backend().data(), 30) > 0;
}

namespace detail {

template <class UInt>
std::uint64_t mod_small(const UInt& v, std::uint32_t p) {
  if constexpr (std::is_same_v<UInt, Natural>) {
    return mpz_fdiv_ui(v.backend().data(), p);
  } else {
    return static_cast<std::uint64_t>(v % p);
  }
}

template <class UInt>
bool is_prime_any(const UInt& v) {
  if constexpr (std::is_same_v<UInt, Natural>) {
    return is_prime(v);
  } else if constexpr (std::is_same_v<UInt, u128>) {
    if (v <= std::numeric_limits<std::uint64_t>::max()) return is_prime(static_cast<std::uint64_t>(v));
    Natural n = static_cast<std::uint64_t>(v >> 64);
    n <<= 64;
    n += static_cast<std::uint64_t>(v);
    return is_prime(n);
  } else {
    return is_prime(static_cast<std::uint64_t>(v));
  }
}

}  // namespace detail

/// base = cofactor * prod(p^e) with every listed p <= bound and every prime
/// factor of cofactor > bound.
template <class UInt>
struct SmoothFactorization {
  UInt base{};
  std::uint32_t bound = 2;
  std::vector<std::pair<std::uint32_t, int>> factors;
  UInt cofactor{};

  [[nodiscard]] bool is_smooth() const { return cofactor == 1; }
};

/// Trial division by the primes <= min(bound, sqrt(remaining)).  UInt may be
/// std::uint64_t, unsigned __int128 or Natural.
template <class UInt>
SmoothFactorization<UInt> smooth_split(const UInt& value, std::uint32_t bound) {
  if (value < 2) throw std::invalid_argument("smooth_split: value must be >= 2");
  if (bound < 2) throw std::invalid_argument("smooth_split: bound must be >= 2");
  SmoothFactorization<UInt> out;
  out.base = value;
  out.bound = bound;
  UInt rem = value;
  const PrimeTable table = prime_table(bound);
  for (std::uint32_t p : *table) {
    if (p > bound) break;
    const UInt pp = UInt(p) * UInt(p);
    if (pp > rem) break;
    if (detail::mod_small(rem, p) != 0) continue;
    int e = 0;
    do {
      rem /= p;
      ++e;
    } while (detail::mod_small(rem, p) == 0);
    out.factors.emplace_back(p, e);
  }
  // Whatever survives is 1, a prime <= bound, or has only factors > bound.
  if (rem > 1 && rem <= bound) {
    out.factors.emplace_back(static_cast<std::uint32_t>(rem), 1);
    rem = 1;
  }
  out.cofactor = rem;
  return out;
}

/// Exact largest prime factor.  Trial division runs while p^2 <= remaining;
/// a primality test on the remainder after each split lets prime cofactors of
/// 128-bit inputs finish early.
template <class UInt>
UInt largest_prime_factor(const UInt& value) {
  if (value < 2) throw std::invalid_argument("largest_prime_factor: value must be >= 2");
  constexpr std::uint32_t kTrialLimit = 1u << 22;
  const PrimeTable table = prime_table(kTrialLimit);
  UInt rem = value;
  UInt largest = 1;
  bool rem_prime = detail::is_prime_any(rem);
  for (std::uint32_t p : *table) {
    if (rem_prime || rem == 1) break;
    if (UInt(p) * UInt(p) > rem) {
      rem_prime = true;
      break;
    }
    if (detail::mod_small(rem, p) != 0) continue;
    do rem /= p;
    while (detail::mod_small(rem, p) == 0);
    largest = p;
    rem_prime = detail::is_prime_any(rem);
  }
  if (rem > 1) {
    if (!rem_prime) throw CapabilityError("largest_prime_factor: composite cofactor beyond trial-division range");
    if (rem > largest) largest = rem;
  }
  return largest;
}

/// v_p(nu!) by Legendre's formula.
inline std::uint64_t legendre_valuation(std::uint64_t p, std::uint64_t nu) {
  if (!is_prime(p)) throw std::invalid_argument("legendre_valuation: p must be prime");
  std::uint64_t total = 0;
  for (std::uint64_t q = nu / p; q > 0; q /= p) total += q;
  return total;
}

/// Variable-precision MPFR real.
using BigReal = bmp::mpfr_float;

namespace detail {

class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits10) : saved_(BigReal::default_precision()) {
    BigReal::default_precision(digits10);
  }
  ~PrecisionGuard() { BigReal::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

}  // namespace detail

/// log(nu!) as a plain sum of logarithms, correct to `digits` significant
/// decimals.  Consecutive factors are multiplied exactly into machine-word
/// blocks first; each block contributes one logarithm.
inline BigReal log_factorial_exact(std::uint64_t nu, unsigned digits = 30) {
  if (digits < 15) throw std::invalid_argument("log_factorial_exact: digits must be >= 15");
  detail::PrecisionGuard guard(digits + 10);
  BigReal sum = 0;
  std::uint64_t block = 1;
  for (std::uint64_t i = 2; i <= nu; ++i) {
    if (block > (std::numeric_limits<std::uint64_t>::max() / i)) {
      sum += log(BigReal(block));
      block = 1;
    }
    block *= i;
  }
  if (block > 1) sum += log(BigReal(block));
  return sum;
}

/// log of an exact positive integer at `digits` significant decimals.
inline BigReal log_natural(const Natural& v, unsigned digits = 30) {
  if (v <= 0) throw std::domain_error("log_natural: value must be positive");
  detail::PrecisionGuard guard(digits + 10);
  BigReal r;
  mpfr_set_z(r.backend().data(), v.backend().data(), MPFR_RNDN);
  return log(r);
}

/// log C(x, r) from the exact integer.
inline BigReal log_binomial_exact(std::uint64_t x, std::int64_t r, unsigned digits = 30) {
  return log_natural(binomial(x, r), digits);
}

}  // namespace binocoll
