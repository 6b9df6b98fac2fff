#pragma once

// Segmented sieve of Eratosthenes over odd numbers: prime streams, exact
// Chebyshev sums, prime neighbours and prime-gap enumeration.

#include <binocoll/interval.hpp>
#include <binocoll/primes.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace binocoll {

/// A prime p and the distance to the next prime.
struct GapEvent {
  std::uint64_t p = 0;
  std::uint64_t gap = 0;

  friend bool operator==(const GapEvent&, const GapEvent&) = default;
};

inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 20;  // odd entries

/// Tiling of [lo, hi] into segments of `segment_size` odd entries.
struct SegmentPlan {
  std::uint64_t lo = 2;
  std::uint64_t hi = 2;
  std::size_t segment_size = kDefaultSegmentSize;

  SegmentPlan(std::uint64_t lo_, std::uint64_t hi_, std::size_t segment_size_ = kDefaultSegmentSize)
      : lo(lo_), hi(hi_), segment_size(segment_size_) {
    if (lo < 2 || lo > hi) throw std::invalid_argument("SegmentPlan: need 2 <= lo <= hi");
    if (segment_size == 0) throw std::invalid_argument("SegmentPlan: segment_size must be positive");
  }

  [[nodiscard]] std::uint64_t span() const { return 2 * static_cast<std::uint64_t>(segment_size); }
  [[nodiscard]] std::uint64_t count() const { return (hi - lo) / span() + 1; }
  /// Inclusive bounds of segment i.
  [[nodiscard]] std::pair<std::uint64_t, std::uint64_t> segment(std::uint64_t i) const {
    const std::uint64_t a = lo + i * span();
    const std::uint64_t b = (hi - a < span()) ? hi : a + span() - 1;
    return {a, b};
  }
};

inline std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// Odd primes up to sqrt(limit), shared by every segment of a scan.
class BasePrimes {
 public:
  explicit BasePrimes(std::uint64_t limit) : limit_(limit) {
    const std::uint64_t root = isqrt(limit) + 1;
    if (root > 0xffffffffull) throw std::out_of_range("BasePrimes: limit beyond 64-bit sieving range");
    const auto all = primes_up_to(static_cast<std::uint32_t>(root));
    odd_.assign(all.begin() + (all.empty() ? 0 : 1), all.end());
  }

  [[nodiscard]] std::uint64_t limit() const { return limit_; }
  [[nodiscard]] const std::vector<std::uint32_t>& odd() const { return odd_; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> odd_;
};

/// flags[i] = 1 iff first_odd + 2i is prime, for i < count.  first_odd must be
/// odd, and first_odd + 2(count-1) <= base.limit().
inline void sieve_odd_block(std::uint64_t first_odd, std::size_t count, const BasePrimes& base,
                            std::vector<std::uint8_t>& flags) {
  flags.assign(count, 1);
  if (count == 0) return;
  const std::uint64_t last = first_odd + 2 * (count - 1);
  if (last > base.limit()) throw std::out_of_range("sieve_odd_block: block beyond base prime coverage");
  for (std::uint32_t p32 : base.odd()) {
    const std::uint64_t p = p32;
    const std::uint64_t sq = p * p;
    if (sq > last) break;
    std::uint64_t start;
    if (sq >= first_odd) {
      start = sq;
    } else {
      start = (first_odd + p - 1) / p * p;
      if ((start & 1) == 0) start += p;
    }
    std::uint8_t* f = flags.data();
    for (std::uint64_t j = (start - first_odd) / 2; j < count; j += p) f[j] = 0;
  }
  if (first_odd == 1) flags[0] = 0;
}

namespace detail {

template <class Fn>
void visit_flags(std::uint64_t first_odd, const std::vector<std::uint8_t>& flags, Fn& fn) {
  const std::size_t n = flags.size();
  const std::uint8_t* f = flags.data();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    std::uint64_t word;
    std::memcpy(&word, f + i, 8);
    if (word == 0) continue;
    for (std::size_t j = i; j < i + 8; ++j)
      if (f[j]) fn(first_odd + 2 * j);
  }
  for (; i < n; ++i)
    if (f[i]) fn(first_odd + 2 * i);
}

}  // namespace detail

/// Calls fn(p) for every prime p in [lo, hi], ascending.  `base` must cover hi.
template <class Fn>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, const BasePrimes& base, Fn&& fn,
                    std::size_t segment_size = kDefaultSegmentSize) {
  if (lo > hi) throw std::invalid_argument("for_each_prime: lo > hi");
  if (lo <= 2 && hi >= 2) fn(std::uint64_t{2});
  std::uint64_t first = std::max<std::uint64_t>(lo, 3) | 1;
  std::vector<std::uint8_t> flags;
  while (first <= hi) {
    const std::uint64_t remaining = (hi - first) / 2 + 1;
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, segment_size));
    sieve_odd_block(first, count, base, flags);
    detail::visit_flags(first, flags, fn);
    if (remaining <= segment_size) break;
    first += 2 * static_cast<std::uint64_t>(count);
  }
}

/// Primes in [lo, hi], ascending.
inline std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi,
                                            std::size_t segment_size = kDefaultSegmentSize) {
  if (lo < 2) lo = 2;
  if (lo > hi) throw std::invalid_argument("primes_in: lo > hi");
  std::vector<std::uint64_t> out;
  const BasePrimes base(hi);
  for_each_prime(lo, hi, base, [&](std::uint64_t p) { out.push_back(p); }, segment_size);
  return out;
}

/// pi(x), theta(x) and psi(x) by direct summation.  theta and psi are
/// enclosures: the midpoint is a compensated sum and the width bounds libm
/// and summation error.
struct ChebyshevValues {
  std::uint64_t pi = 0;
  Interval theta;
  Interval psi;
};

inline constexpr std::uint64_t kChebyshevExactLimit = 1'000'000'000;

namespace detail {

/// Neumaier summation that also tracks sum |term| for the error bound.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
    abs_ += std::abs(v);
    ++terms_;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }
  /// Each term carries <= 2 ulp from log and one product rounding; the
  /// compensated sum adds <= 2u * sum|t| + O(n u^2).
  [[nodiscard]] Interval enclosure() const {
    constexpr double u = 0x1p-53;
    const double err = 8.0 * u * abs_ * 1.0000001 + 1e-300;
    const double v = value();
    return {down(v - err), up(v + err)};
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
  std::uint64_t terms_ = 0;
};

}  // namespace detail

inline ChebyshevValues chebyshev_exact(std::uint64_t x, std::uint64_t limit = kChebyshevExactLimit) {
  if (x < 2) throw std::invalid_argument("chebyshev_exact: x must be >= 2");
  if (x > limit) throw std::out_of_range("chebyshev_exact: x beyond exact-summation limit");
  const BasePrimes base(x);
  detail::CompensatedSum theta, psi;
  std::uint64_t count = 0;
  for_each_prime(2, x, base, [&](std::uint64_t p) {
    ++count;
    const double lp = std::log(static_cast<double>(p));
    theta.add(lp);
    int powers = 0;
    for (std::uint64_t q = p; q <= x; q *= p) {
      ++powers;
      if (q > x / p) break;
    }
    psi.add(powers * lp);
  });
  return {count, theta.enclosure(), psi.enclosure()};
}

/// pi(x) by counting sieve output.
inline std::uint64_t prime_count(std::uint64_t x) {
  if (x < 2) return 0;
  const BasePrimes base(x);
  std::uint64_t count = 0;
  for_each_prime(2, x, base, [&](std::uint64_t) { ++count; });
  return count;
}

/// pi, theta and psi at every integer 0..limit (cumulative).
struct ChebyshevTable {
  std::vector<std::uint32_t> pi;
  std::vector<double> theta;
  std::vector<double> psi;
  /// Absolute error bound on theta[x] and psi[x] for x <= limit.
  double error_bound = 0.0;
};

inline ChebyshevTable chebyshev_table(std::uint32_t limit) {
  ChebyshevTable t;
  t.pi.assign(limit + 1, 0);
  t.theta.assign(limit + 1, 0.0);
  t.psi.assign(limit + 1, 0.0);
  std::vector<double> theta_jump(limit + 1, 0.0), psi_jump(limit + 1, 0.0);
  std::vector<std::uint8_t> is_p(limit + 1, 0);
  for (std::uint32_t p : primes_up_to(limit)) {
    is_p[p] = 1;
    const double lp = std::log(static_cast<double>(p));
    theta_jump[p] = lp;
    for (std::uint64_t q = p; q <= limit; q *= p) psi_jump[q] = lp;
  }
  detail::CompensatedSum th, ps;
  std::uint32_t count = 0;
  for (std::uint32_t x = 0; x <= limit; ++x) {
    if (is_p[x]) {
      ++count;
      th.add(theta_jump[x]);
    }
    if (psi_jump[x] != 0.0) ps.add(psi_jump[x]);
    t.pi[x] = count;
    t.theta[x] = th.value();
    t.psi[x] = ps.value();
  }
  t.error_bound = ps.enclosure().width();
  return t;
}

/// Largest prime <= x and smallest prime > x.
inline std::pair<std::uint64_t, std::uint64_t> prime_neighbors(std::uint64_t x) {
  if (x < 3) throw std::invalid_argument("prime_neighbors: x must be >= 3");
  std::uint64_t prev = 0, next = 0;
  for (std::uint64_t w = 64; prev == 0; w *= 2) {
    const std::uint64_t lo = x > w + 2 ? x - w : 2;
    const BasePrimes base(x);
    for_each_prime(lo, x, base, [&](std::uint64_t p) { prev = p; });
  }
  for (std::uint64_t w = 64; next == 0; w *= 2) {
    const BasePrimes base(x + w);
    for_each_prime(x + 1, x + w, base, [&](std::uint64_t p) {
      if (next == 0) next = p;
    });
  }
  return {prev, next};
}

/// Gap events for primes p in [lo, hi) with the next prime searched past hi.
/// Single-threaded kernel shared by the parallel scan.
inline std::vector<GapEvent> gap_events_in(std::uint64_t lo, std::uint64_t hi, std::uint64_t min_gap,
                                           const BasePrimes& base, std::size_t segment_size,
                                           std::uint64_t overlap = 1000) {
  std::vector<GapEvent> out;
  if (lo >= hi) return out;
  std::uint64_t prev = 0;
  bool closed = false;
  auto visit = [&](std::uint64_t p) {
    if (closed) return;
    if (prev != 0 && p - prev >= min_gap) out.push_back({prev, p - prev});
    if (p >= hi) {
      closed = true;
      return;
    }
    prev = p;
  };
  for_each_prime(lo, hi - 1, base, visit, segment_size);
  // Close the last gap from the overlap window, widening until a prime shows up.
  std::uint64_t from = hi;
  for (std::uint64_t w = overlap; !closed && prev != 0; w *= 2) {
    const std::uint64_t to = from + w;
    if (to > base.limit()) {
      const BasePrimes wider(to);
      for_each_prime(from, to, wider, visit, segment_size);
    } else {
      for_each_prime(from, to, base, visit, segment_size);
    }
    from = to + 1;
  }
  return out;
}

struct GapScanOptions {
  std::uint64_t lo = 2;
  std::uint64_t hi = 2;  // exclusive
  std::uint64_t min_gap = 1;
  std::size_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
  std::uint64_t overlap = 1000;
};

inline unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs the gap scan chunk by chunk (one chunk per sieve segment).  Chunks are
/// processed `threads` at a time and handed to sink(chunk_lo, chunk_hi,
/// events) in ascending order, so the observed stream is independent of the
/// worker count.  `per_chunk(events)` runs on the worker thread before the
/// merge and may be empty.  The scan stops early if sink returns false.
template <class Sink, class PerChunk>
void gap_scan_chunks(const GapScanOptions& opt, Sink&& sink, PerChunk&& per_chunk) {
  if (opt.min_gap < 1) throw std::invalid_argument("gap_scan: min_gap must be >= 1");
  if (opt.lo < 2 || opt.lo >= opt.hi) throw std::invalid_argument("gap_scan: need 2 <= lo < hi");
  const BasePrimes base(opt.hi + 4 * opt.overlap + 2);
  const SegmentPlan plan(opt.lo, opt.hi - 1, opt.segment_size);
  const unsigned workers = resolve_threads(opt.threads);
  const std::uint64_t total = plan.count();
  for (std::uint64_t first = 0; first < total; first += workers) {
    const std::uint64_t n = std::min<std::uint64_t>(workers, total - first);
    std::vector<std::vector<GapEvent>> results(n);
    auto work = [&](std::uint64_t i) {
      const auto [a, b] = plan.segment(first + i);
      results[i] = gap_events_in(a, b + 1, opt.min_gap, base, opt.segment_size, opt.overlap);
      per_chunk(results[i]);
    };
    if (n == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) pool.emplace_back(work, i);
      for (auto& t : pool) t.join();
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto [a, b] = plan.segment(first + i);
      if (!sink(a, b + 1, std::move(results[i]))) return;
    }
  }
}

/// All gap events with p in [lo, hi) and gap >= min_gap, ascending in p.
inline std::vector<GapEvent> gap_scan(const GapScanOptions& opt) {
  std::vector<GapEvent> out;
  gap_scan_chunks(
      opt,
      [&](std::uint64_t, std::uint64_t, std::vector<GapEvent>&& ev) {
        out.insert(out.end(), ev.begin(), ev.end());
        return true;
      },
      [](std::vector<GapEvent>&) {});
  return out;
}

inline std::vector<GapEvent> gap_scan(std::uint64_t lo, std::uint64_t hi, std::uint64_t min_gap,
                                      unsigned threads = 1) {
  GapScanOptions opt;
  opt.lo = lo;
  opt.hi = hi;
  opt.min_gap = min_gap;
  opt.threads = threads;
  return gap_scan(opt);
}

}  // namespace binocoll
