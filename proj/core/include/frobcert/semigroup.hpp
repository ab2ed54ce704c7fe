#pragma once

#include <cstdint>
#include <optional>

#include "frobcert/errors.hpp"

namespace frobcert {

using u64 = std::uint64_t;
using u128 = __uint128_t;

// A witness that n = a*x + b*y with x, y >= 0.
struct Representation {
  u64 x = 0;
  u64 y = 0;
  u64 n = 0;
};

// Validated coprime generator pair 2 <= a < b with cached derived data.
// Immutable after make_pair; freely shareable across threads.
//
// g = a*b - a - b is the Frobenius number of <a, b>: the largest integer
// with no representation a*x + b*y (x, y >= 0). Below g representations
// are unique, which the counting routines rely on.
struct GeneratorPair {
  u64 a = 0;
  u64 b = 0;
  u64 g = 0;
  u64 phi_a = 0;         // Euler totient of a
  u64 b_inv_mod_a = 0;   // cached modular inverse, drives is_representable
  bool a_is_prime = false;
  bool b_is_prime = false;
};

// Validates 2 <= a < b, gcd(a, b) = 1 and a*b < 2^62 (so every
// intermediate product in the library stays inside 64 bits), then caches
// g, phi(a), b^-1 mod a and primality flags.
//
// Throws NotCoprime or OutOfDomain.
GeneratorPair make_pair(u64 a, u64 b);

// Minimal-y representation of n if one exists. O(1): y0 = n*b^-1 mod a,
// representable iff b*y0 <= n. For n <= g the representation is unique.
std::optional<Representation> is_representable(const GeneratorPair& pair, u64 n);

// Number of representable integers in [0, c] for c <= g, via the lattice
// sum over y of floor((c - b*y)/a) + 1. O(c/b) additions.
// Throws OutOfRange for c > g.
u64 count_representable_up_to(const GeneratorPair& pair, u64 c);

// (a-1)(b-1)/2: how many integers in [0, g] have no representation.
u64 non_representable_count(const GeneratorPair& pair);

// Euler totient by trial-division factorization.
u64 euler_phi(u64 n);

// x with a*x == 1 (mod m); requires gcd(a, m) = 1.
u64 mod_inverse(u64 a, u64 m);

}  // namespace frobcert
