#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frobcert/errors.hpp"
#include "frobcert/semigroup.hpp"

namespace frobcert {

// Exact counting above this is out of desk scope; analytic certificates
// cover the larger regions.
inline constexpr u64 kSieveCeiling = 1'000'000'000'000ULL;

// Deterministic 64-bit primality: strong-probable-prime tests against a
// witness basis proven complete for all n < 2^64.
bool is_prime(u64 n);

// One sieved window. After sieving with all base primes <= sqrt(hi),
// unset flags are exactly the odd primes in [lo, hi].
struct SieveSegment {
  u64 lo = 0;
  u64 hi = 0;                // inclusive
  u64 first_odd = 0;
  std::vector<u64> words;    // bit i set <=> first_odd + 2*i is composite

  bool composite_odd(u64 n) const {
    u64 i = (n - first_odd) >> 1;
    return (words[i >> 6] >> (i & 63)) & 1;
  }

  // Calls f(p) for every prime in [lo, hi] in increasing order (2 included
  // when it lies in range). Tail bits and the slot for 1 are pre-set by
  // sieve_segment, so every clear bit is a prime.
  template <class F>
  void for_each_prime(F&& f) const {
    if (lo <= 2 && 2 <= hi) f(u64{2});
    for (u64 w = 0; w < words.size(); ++w) {
      u64 bits = ~words[w];
      while (bits) {
        const u64 i = (w << 6) + static_cast<u64>(__builtin_ctzll(bits));
        bits &= bits - 1;
        f(first_odd + 2 * i);
      }
    }
  }
};

u64 default_segment_odds();
void set_default_segment_odds(u64 odds);  // e.g. from FPC_SIEVE_SEGMENT

// Odd-only segmented sieve of Eratosthenes. Base primes are grown lazily
// and reused across segments; segments are sized to stay cache resident.
class SegmentedSieve {
 public:
  explicit SegmentedSieve(u64 segment_odds = default_segment_odds());

  // Sieve [lo, hi]; the span must not exceed the configured segment size.
  SieveSegment sieve_segment(u64 lo, u64 hi);

  u64 segment_span() const { return 2 * segment_odds_; }

  // Streams every prime in [lo, hi] in increasing order.
  template <class F>
  void for_each_prime(u64 lo, u64 hi, F&& f) {
    if (hi < lo || hi < 2) return;
    if (lo < 2) lo = 2;
    for (u64 base = lo; base <= hi;) {
      const u64 top = (hi - base >= segment_span() - 1) ? base + segment_span() - 1 : hi;
      sieve_segment(base, top).for_each_prime(f);
      if (top == hi) break;
      base = top + 1;
    }
  }

  // Popcount path, no per-prime callback.
  u64 count_primes(u64 lo, u64 hi);

 private:
  void extend_base(u64 limit);

  u64 segment_odds_;
  std::vector<std::uint32_t> base_primes_;  // odd primes only
  u64 base_limit_ = 2;
};

// Every prime in [lo, hi], materialized. Guarded by kSieveCeiling and a
// sanity cap on the result size; use SegmentedSieve::for_each_prime to
// stream larger ranges.
std::vector<u64> primes_in_range(u64 lo, u64 hi);

// pi(x), by segmented sieve. `threads` > 1 splits the range into
// independent chunks; the total is scheduling independent.
u64 prime_count(u64 x, unsigned threads = 1);

// pi(x; q, m): primes p <= x with p == m (mod q). Requires gcd(m, q) = 1.
u64 prime_count_ap(u64 x, u64 q, u64 m);

// Smallest prime p == start (mod step) with start <= p <= limit. Tests
// candidates directly and switches to a segmented sieve once more than
// `direct_limit` candidates have been tried.
std::optional<u64> first_prime_in_ap(u64 start, u64 step, u64 limit,
                                     u64 direct_limit = 100'000);

// Exact pi_{a,b}: primes p <= g representable as a*x + b*y. Streams the
// segmented sieve through [2, g] and filters with the O(1)
// representability test. Throws RangeTooLarge for g > kSieveCeiling.
u64 pi_ab(const GeneratorPair& pair, unsigned threads = 1);

}  // namespace frobcert
