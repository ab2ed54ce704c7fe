#pragma once

#include <stdexcept>

namespace frobcert {

// Base class for every error thrown by this library. The CLI maps the
// concrete types below onto stable exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// gcd(a, b) != 1 where coprimality is required.
class NotCoprime : public Error {
 public:
  using Error::Error;
};

// Input outside a constructor's accepted domain (a < 2, a >= b, overflow).
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's valid range (e.g. c > g).
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// Request beyond the sieve's practical ceiling.
class RangeTooLarge : public Error {
 public:
  using Error::Error;
};

// Real-valued function evaluated outside its validity domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// No explicit prime-counting error bound covers the requested (x, q).
class NoApplicableLemma : public Error {
 public:
  using Error::Error;
};

// Pair does not satisfy the requested case's region constraints.
class WrongRegion : public Error {
 public:
  using Error::Error;
};

// Every certification strategy failed. Outside the single vacuous pair
// (2, 3) this indicates a bug and should be treated as fatal.
class NoCertificate : public Error {
 public:
  using Error::Error;
};

// Checkpoint file unreadable or inconsistent with the job being resumed.
class CheckpointCorrupt : public Error {
 public:
  using Error::Error;
};

// g < 2: no primes can exist at or below g.
class DegenerateG : public Error {
 public:
  using Error::Error;
};

}  // namespace frobcert
