#include "frobcert/semigroup.hpp"

#include <numeric>
#include <string>

#include "frobcert/sieve.hpp"

namespace frobcert {

namespace {

// a*b below this keeps a*x + b*y and the lattice sums inside 64 bits.
constexpr u64 kProductCeiling = u64{1} << 62;

}  // namespace

u64 mod_inverse(u64 a, u64 m) {
  // extended Euclid on (a mod m, m), tracking only the x coefficient
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m);
  std::int64_t new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw NotCoprime("mod_inverse: arguments are not coprime");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<u64>(t);
}

u64 euler_phi(u64 n) {
  u64 result = n;
  u64 m = n;
  for (u64 p = 2; p * p <= m; p += (p == 2) ? 1 : 2) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

GeneratorPair make_pair(u64 a, u64 b) {
  if (a < 2) throw OutOfDomain("make_pair: a must be at least 2");
  if (a >= b) throw OutOfDomain("make_pair: requires a < b");
  if (b >= kProductCeiling / a)
    throw OutOfDomain("make_pair: a*b exceeds the 2^62 arithmetic ceiling");
  if (std::gcd(a, b) != 1)
    throw NotCoprime("make_pair: gcd(" + std::to_string(a) + ", " +
                     std::to_string(b) + ") != 1");

  GeneratorPair pair;
  pair.a = a;
  pair.b = b;
  pair.g = a * b - a - b;
  pair.phi_a = euler_phi(a);
  pair.b_inv_mod_a = mod_inverse(b, a);
  pair.a_is_prime = is_prime(a);
  pair.b_is_prime = is_prime(b);
  return pair;
}

std::optional<Representation> is_representable(const GeneratorPair& pair, u64 n) {
  // minimal y with b*y == n (mod a); works because gcd(a, b) = 1
  const u64 y0 = (n % pair.a) * pair.b_inv_mod_a % pair.a;
  const u64 by = pair.b * y0;  // < a*b < 2^62
  if (by > n) return std::nullopt;
  return Representation{(n - by) / pair.a, y0, n};
}

u64 count_representable_up_to(const GeneratorPair& pair, u64 c) {
  if (c > pair.g)
    throw OutOfRange("count_representable_up_to: c exceeds the Frobenius number");
  u64 count = 0;
  for (u64 rem = c;; rem -= pair.b) {
    count += rem / pair.a + 1;
    if (rem < pair.b) break;
  }
  return count;
}

u64 non_representable_count(const GeneratorPair& pair) {
  return (pair.a - 1) * (pair.b - 1) / 2;
}

}  // namespace frobcert
