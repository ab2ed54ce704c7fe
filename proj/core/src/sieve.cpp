#include "frobcert/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace frobcert {

namespace {

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128{a} * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool strong_probable_prime(u64 n, u64 a, u64 d, int s) {
  a %= n;
  if (a == 0) return true;
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

constexpr u64 kTrialPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

std::atomic<u64> g_default_segment_odds{u64{1} << 22};

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : kTrialPrimes) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;

  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // {2, 7, 61} is a complete witness basis below 4759123141; the first
  // twelve primes are complete for the whole 64-bit range.
  if (n < 4759123141ULL) {
    for (u64 a : {u64{2}, u64{7}, u64{61}}) {
      if (!strong_probable_prime(n, a, d, s)) return false;
    }
    return true;
  }
  for (u64 a : kTrialPrimes) {
    if (!strong_probable_prime(n, a, d, s)) return false;
  }
  return true;
}

u64 default_segment_odds() { return g_default_segment_odds.load(std::memory_order_relaxed); }

void set_default_segment_odds(u64 odds) {
  odds = std::clamp<u64>(odds, u64{1} << 14, u64{1} << 26);
  g_default_segment_odds.store(odds, std::memory_order_relaxed);
}

SegmentedSieve::SegmentedSieve(u64 segment_odds)
    : segment_odds_(std::max<u64>(segment_odds, u64{1} << 10)) {}

void SegmentedSieve::extend_base(u64 limit) {
  if (limit <= base_limit_) return;
  limit = std::max<u64>(limit + limit / 4, 1024);  // hysteresis
  std::vector<bool> composite(limit + 1, false);
  base_primes_.clear();
  for (u64 i = 3; i <= limit; i += 2) {
    if (composite[i]) continue;
    base_primes_.push_back(static_cast<std::uint32_t>(i));
    for (u64 j = i * i; j <= limit; j += 2 * i) composite[j] = true;
  }
  base_limit_ = limit;
}

SieveSegment SegmentedSieve::sieve_segment(u64 lo, u64 hi) {
  SieveSegment seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.first_odd = lo | 1;
  if (hi < seg.first_odd) return seg;
  const u64 slots = ((hi - seg.first_odd) >> 1) + 1;
  if (slots > segment_odds_ + 64)
    throw OutOfRange("sieve_segment: span exceeds the configured segment size");
  seg.words.assign((slots + 63) / 64, 0);

  extend_base(isqrt(hi));
  for (std::uint32_t p32 : base_primes_) {
    const u64 p = p32;
    if (p * p > hi) break;
    // first odd multiple of p inside [max(p^2, lo), hi]
    u64 m = std::max(p * p, (lo + p - 1) / p * p);
    if ((m & 1) == 0) m += p;
    for (; m <= hi; m += 2 * p) {
      const u64 i = (m - seg.first_odd) >> 1;
      seg.words[i >> 6] |= u64{1} << (i & 63);
    }
  }
  if (seg.first_odd == 1) seg.words[0] |= 1;  // 1 is not prime
  // mask the tail so popcount and bit iteration see only real slots
  const u64 tail = slots & 63;
  if (tail) seg.words.back() |= ~u64{0} << tail;
  return seg;
}

u64 SegmentedSieve::count_primes(u64 lo, u64 hi) {
  if (hi < lo || hi < 2) return 0;
  if (lo < 2) lo = 2;
  u64 count = (lo <= 2 && 2 <= hi) ? 1 : 0;
  for (u64 base = lo; base <= hi;) {
    const u64 top = (hi - base >= segment_span() - 1) ? base + segment_span() - 1 : hi;
    const SieveSegment seg = sieve_segment(base, top);
    for (u64 w : seg.words) count += static_cast<u64>(__builtin_popcountll(~w));
    if (top == hi) break;
    base = top + 1;
  }
  return count;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  if (hi > kSieveCeiling)
    throw RangeTooLarge("primes_in_range: hi exceeds the sieve ceiling");
  if (hi > lo && hi - lo > (u64{1} << 30))
    throw RangeTooLarge("primes_in_range: span too large to materialize; stream instead");
  std::vector<u64> out;
  if (hi < lo) return out;
  SegmentedSieve sieve;
  sieve.for_each_prime(lo, hi, [&](u64 p) { out.push_back(p); });
  return out;
}

namespace {

// Splits [lo, hi] into segment-aligned chunks and folds f over each chunk's
// segment on `threads` workers. Chunk results combine by addition, so the
// total is independent of scheduling.
template <class PerSegment>
u64 parallel_segment_sum(u64 lo, u64 hi, unsigned threads, PerSegment f) {
  if (hi < lo) return 0;
  SegmentedSieve probe;
  const u64 span = probe.segment_span();
  const u64 chunks = (hi - lo) / span + 1;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                              std::min<u64>(chunks, 256))));
  if (threads == 1) {
    u64 total = 0;
    for (u64 base = lo; base <= hi;) {
      const u64 top = (hi - base >= span - 1) ? base + span - 1 : hi;
      total += f(probe.sieve_segment(base, top));
      if (top == hi) break;
      base = top + 1;
    }
    return total;
  }
  std::atomic<u64> next{0};
  std::atomic<u64> total{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      SegmentedSieve local;
      u64 sum = 0;
      for (;;) {
        const u64 idx = next.fetch_add(1, std::memory_order_relaxed);
        if (idx >= chunks) break;
        const u64 base = lo + idx * span;
        const u64 top = std::min(hi, base + span - 1);
        sum += f(local.sieve_segment(base, top));
      }
      total.fetch_add(sum, std::memory_order_relaxed);
    });
  }
  for (auto& th : pool) th.join();
  return total.load();
}

}  // namespace

u64 prime_count(u64 x, unsigned threads) {
  if (x > kSieveCeiling) throw RangeTooLarge("prime_count: x exceeds the sieve ceiling");
  if (x < 2) return 0;
  if (threads <= 1) return SegmentedSieve().count_primes(2, x);
  return parallel_segment_sum(2, x, threads, [](const SieveSegment& seg) {
    u64 c = (seg.lo <= 2 && 2 <= seg.hi) ? 1 : 0;
    for (u64 w : seg.words) c += static_cast<u64>(__builtin_popcountll(~w));
    return c;
  });
}

u64 prime_count_ap(u64 x, u64 q, u64 m) {
  if (q < 1) throw OutOfDomain("prime_count_ap: q must be positive");
  if (std::gcd(m, q) != 1) throw NotCoprime("prime_count_ap: gcd(m, q) != 1");
  if (x > kSieveCeiling) throw RangeTooLarge("prime_count_ap: x exceeds the sieve ceiling");
  if (x < 2) return 0;
  const u64 target = m % q;
  u64 count = 0;
  SegmentedSieve sieve;
  sieve.for_each_prime(2, x, [&](u64 p) {
    if (p % q == target) ++count;
  });
  return count;
}

std::optional<u64> first_prime_in_ap(u64 start, u64 step, u64 limit, u64 direct_limit) {
  if (step < 1) throw OutOfDomain("first_prime_in_ap: step must be >= 1");
  if (start > limit) return std::nullopt;

  // If d = gcd(start, step) > 1 every candidate is divisible by d, so the
  // only possible prime is d itself (when it is a candidate at all).
  const u64 d = start == 0 ? step : std::gcd(start, step);
  if (d > 1) {
    if (d >= start && d <= limit && (d - start) % step == 0 && is_prime(d)) return d;
    return std::nullopt;
  }

  u64 n = start, st = step;
  // candidates below 3 in order (catches p = 2)
  while (n < 3) {
    if (is_prime(n)) return n;
    if (limit - n < st) return std::nullopt;
    n += st;
  }
  if (st & 1) {
    // an odd step alternates parity; once n >= 3 the even candidates can
    // never be prime, so fold them away
    if ((n & 1) == 0) {
      if (limit - n < st) return std::nullopt;
      n += st;
    }
    st *= 2;
  }
  // an even step with even start has gcd >= 2, so every candidate from
  // here on is odd

  for (u64 tried = 0; tried < direct_limit; ++tried) {
    if (is_prime(n)) return n;
    if (limit - n < st) return std::nullopt;
    n += st;
  }

  // Sparse progression: sieve the remaining range instead of testing
  // candidates one by one. Beyond the ceiling sqrt(hi) base sieving is no
  // longer cheap, so stay with direct tests there.
  if (limit > kSieveCeiling) {
    for (;;) {
      if (is_prime(n)) return n;
      if (limit - n < st) return std::nullopt;
      n += st;
    }
  }
  SegmentedSieve sieve;
  const u64 span = sieve.segment_span();
  while (n <= limit) {
    const u64 top = std::min(limit, n + span - 1);
    const SieveSegment seg = sieve.sieve_segment(n, top);
    while (n <= top) {
      if (!seg.composite_odd(n)) return n;
      if (limit - n < st) return std::nullopt;
      n += st;
    }
  }
  return std::nullopt;
}

u64 pi_ab(const GeneratorPair& pair, unsigned threads) {
  const u64 g = pair.g;
  if (g < 2) return 0;
  if (g > kSieveCeiling) throw RangeTooLarge("pi_ab: g exceeds the sieve ceiling");
  return parallel_segment_sum(2, g, threads, [&pair](const SieveSegment& seg) {
    u64 c = 0;
    seg.for_each_prime([&](u64 p) {
      if (is_representable(pair, p)) ++c;
    });
    return c;
  });
}

}  // namespace frobcert
