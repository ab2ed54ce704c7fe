#pragma once

#include <chrono>
#include <string>
#include <variant>

#include "frobcert/analytic.hpp"
#include "frobcert/case_label.hpp"
#include "frobcert/semigroup.hpp"

namespace frobcert {

// Explicit prime witness: p = a*x + b*y <= g.
struct WitnessCertificate {
  u64 p = 0;
  Representation rep;
};

// Self-contained, independently re-checkable record that some prime
// p <= g is representable. Either an explicit witness or a positive
// analytic margin for the labeled region.
struct Certificate {
  GeneratorPair pair;
  CaseLabel label = CaseLabel::ResidualIII;
  std::variant<WitnessCertificate, MarginReport> body;
  std::chrono::system_clock::time_point issued_at;  // in-memory only

  bool is_witness() const { return body.index() == 0; }
  bool is_analytic() const { return body.index() == 1; }
  const WitnessCertificate& witness() const { return std::get<0>(body); }
  const MarginReport& margin() const { return std::get<1>(body); }
};

// Deterministic label by priority: EdgeA2, PrimeGenerator, then the
// a > 1e4 branch (CaseI / CaseIII / CaseII when g > 5e8, else ResidualI)
// and the a <= 1e4 branch (CaseIV/CaseV above b = 8e9, CaseVI/CaseVII/
// CaseVIII for 1e6 <= b <= 8e9, ResidualIII below 1e6). Total on valid
// pairs.
CaseLabel classify(const GeneratorPair& pair);

namespace detail {
// classify() on raw fields; lets bulk enumeration reuse cached primality.
CaseLabel classify_raw(u64 a, u64 b, u64 g, bool a_prime, bool b_prime);
}  // namespace detail

// The numeric region predicate behind a label (what verify_certificate
// re-checks). For EdgeA2/PrimeGenerator/Residual labels this is the
// classifier's condition itself.
bool in_region(CaseLabel label, const GeneratorPair& pair);

// Certification strategy: witness shortcut for EdgeA2/PrimeGenerator,
// analytic margin for the case labels (falling back to witness search if
// the margin is slack-blocked), direct witness search for residual
// regions. Search order is deterministic: y = 1 ascending x, then
// y = 0, 2, 3, ... Throws NoCertificate only for the vacuous pair (2, 3).
Certificate certify(const GeneratorPair& pair);

// Recomputes everything from the pair alone: witnesses re-checked with
// independent primality (trial division where feasible) plus the exact
// representation identity; analytic certificates re-checked against the
// label's region predicate and a margin re-evaluation with quadrature
// tolerance tightened 10x. Returns false on any mismatch.
bool verify_certificate(const Certificate& cert);

// Fixed-field-order JSON, schema_version 1. Reals carry 17 significant
// digits; identical certificates serialize byte-identically.
std::string certificate_to_json(const Certificate& cert);

// Parses certificate JSON (field order insensitive). Throws Error on
// malformed input; the result still has to pass verify_certificate.
Certificate certificate_from_json(const std::string& text);

}  // namespace frobcert
