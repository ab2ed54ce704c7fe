#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frobcert/case_label.hpp"
#include "frobcert/errors.hpp"
#include "frobcert/semigroup.hpp"

namespace frobcert {

// Explicit Siegel-Walfisz error constants (Bennett-Martin-O'Bryant-
// Rechnitzer): |pi(x;q,m) - Li(x)/phi(q)| < c0 * x/(log x)^2 for
// x >= x0(q). For q > 1e4 the threshold exp(0.03 sqrt(q) (log q)^3)
// overflows double, so log_x0 carries the always-finite exponent.
struct BennettConstants {
  double c0 = 0;
  double x0 = 0;      // may be +inf; compare against log_x0 instead
  double log_x0 = 0;
};

struct MarginTerm {
  std::string name;
  double value = 0;
};

// One evaluated analytic inequality: a lower bound for the number of
// representable primes, itemized so a verifier can recompute it.
struct MarginReport {
  CaseLabel label = CaseLabel::CaseII;
  double main_term = 0;
  std::vector<MarginTerm> deductions;
  double margin = 0;        // main_term - sum(deductions)
  double safety_slack = 0;  // max(1, 1e-9 * main_term)
  u64 a = 0;                // inputs; zero when evaluated at synthetic g
  u64 b = 0;
  u64 g = 0;

  double recomputed_margin() const;
  bool certifies() const { return margin > safety_slack; }
};

double default_quadrature_tol();  // relative, 1e-12

// Li(x) = integral of dt/log t from 2 to x, by adaptive Simpson quadrature
// on the log-substituted integrand. Throws DomainError for x < 2.
double log_integral(double x, double rel_tol = default_quadrature_tol());

// Two-sided elementary bounds for pi(x), valid for x >= 59:
//   x/(log x - 1 + (log x)^-0.5) < pi(x) < x/(log x - 1 - (log x)^-0.5).
// Throws DomainError for x < 59.
std::pair<double, double> panaitopol_bounds(double x);

// Throws DomainError for q < 3.
BennettConstants bennett_constants(u64 q);

enum class ApBoundSource {
  BennettMain,   // c0(q) x/(log x)^2 for x >= x0(q)
  SmallModulus,  // 0.027 x/(log x)^2 for q <= 1e5, x >= 1e6
  SqrtWindow,    // 2.734 sqrt(x)/log x for 100 <= q <= 1e4, x <= 1e11
};
const char* to_string(ApBoundSource source);

struct ApErrorBound {
  double bound = 0;
  ApBoundSource source = ApBoundSource::BennettMain;
};

// Sharpest applicable bound on |pi(x;q,m) - Li(x)/phi(q)| among the three
// sources above. Throws NoApplicableLemma when no validity window
// contains (x, q).
ApErrorBound ap_error_bound(double x, u64 q);

// Short-interval lower bound on the representable primes in (g - c, g]
// with c = g/log g:
//
//   pan_lower(g) - pan_upper(g - c) - g/(2 (log g)^2)
//     - g/(K log_b log g) - sqrt(g)/log g - 1
//
// K is the case constant (155 for CaseII, 4.2 for CaseIII, 210 for CaseV);
// the caller chooses log_b (log sqrt(g) for the b-free sweep, the pair's
// actual log b when certifying). Requires both Panaitopol arguments >= 59.
MarginReport short_interval_margin(double g, double log_b, double K,
                                   double rel_tol = default_quadrature_tol());

// Closed-form lower bound for the short-interval margin at log_b =
// log sqrt(g), valid for g > 1e18:
//
//   (1/4 - 2/K) g/(log g)^2 - g/(log g)^2.5 + (5/4) g/(log g)^3
//     - sqrt(g)/log g - 1
//
// Derived by Taylor-expanding both Panaitopol terms; for K = 155 the
// leading coefficient is 147/620. The (5/4) g/(log g)^3 term is the exact
// expansion product; the weaker reading without the factor g is also a
// valid lower bound but is not used (see the tail tests, which pin this
// bound below the directly evaluated margin). Throws DomainError for
// g <= 1e18.
double short_interval_margin_tail(double g, double K);

// Evaluates one case's margin chain with every term itemized:
//   CaseI    (g-b)/(4.2 (log g)^2)        - g/(80 (log g)^2)
//   CaseIV   (g-b)/(phi(a) log g)         - g/(420 (log g)^2)
//   CaseVI   (Li(g)-Li(b))/phi(a)         - 0.027 g/(log g)^2 - 0.027 b/(log b)^2
//   CaseVII  Li(g)/phi(a)                 - (b/a + 1) - g/(840 (log g)^2)
//   CaseVIII (Li(g)-Li(b))/phi(a)         - 5.5 sqrt(g)/log g
// Throws WrongRegion if the pair violates the variant's region
// constraints (primality of a, b is irrelevant to the bounds and is not
// checked here).
MarginReport ap_count_margin(const GeneratorPair& pair, CaseLabel variant,
                             double rel_tol = default_quadrature_tol());

// Same formulas on raw real inputs, without region validation. Lets the
// CaseI/CaseIII chains (whose regions need b beyond 64-bit width) be
// exercised numerically.
MarginReport case_margin_unchecked(CaseLabel variant, double a, double b,
                                   double g, double phi_a,
                                   double rel_tol = default_quadrature_tol());

}  // namespace frobcert
