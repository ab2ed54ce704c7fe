#include "frobcert/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace frobcert {

namespace {

constexpr double kSmallModulusCoeff = 0.027;  // q <= 1e5, x >= 1e6
constexpr double kSqrtWindowCoeff = 2.734;    // 100 <= q <= 1e4, x <= 1e11

double slack_for(double main_term) { return std::max(1.0, 1e-9 * main_term); }

struct Quadrature {
  double abs_tol;
  int max_depth = 64;

  static double integrand(double u) { return std::exp(u) / u; }

  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double refine(double a, double b, double fa, double fm, double fb,
                double whole, double eps, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = integrand(lm), frm = integrand(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth >= max_depth || std::fabs(delta) <= 15.0 * eps)
      return left + right + delta / 15.0;
    return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }

  double integrate(double a, double b) const {
    if (b <= a) return 0.0;
    const double fa = integrand(a), fb = integrand(b);
    const double m = 0.5 * (a + b);
    const double fm = integrand(m);
    return refine(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), abs_tol, 0);
  }
};

}  // namespace

double default_quadrature_tol() { return 1e-12; }

double MarginReport::recomputed_margin() const {
  double m = main_term;
  for (const MarginTerm& t : deductions) m -= t.value;
  return m;
}

double log_integral(double x, double rel_tol) {
  if (!(x >= 2.0)) throw DomainError("log_integral: requires x >= 2");
  if (x == 2.0) return 0.0;
  // substitute u = log t: integral of e^u/u du over [log 2, log x]
  const double lo = std::log(2.0), hi = std::log(x);
  const double rough = x > 4.0 ? x / std::log(x) : 1.0;
  Quadrature quad{rel_tol * std::max(1.0, rough)};
  return quad.integrate(lo, hi);
}

std::pair<double, double> panaitopol_bounds(double x) {
  if (!(x >= 59.0)) throw DomainError("panaitopol_bounds: requires x >= 59");
  const double L = std::log(x);
  const double s = 1.0 / std::sqrt(L);
  return {x / (L - 1.0 + s), x / (L - 1.0 - s)};
}

BennettConstants bennett_constants(u64 q) {
  if (q < 3) throw DomainError("bennett_constants: requires q >= 3");
  BennettConstants out;
  if (q <= 10'000) {
    out.c0 = 1.0 / 840.0;
    out.log_x0 = std::log(8e9);
    out.x0 = 8e9;
  } else {
    // exp(0.03 sqrt(q) (log q)^3) exceeds 8e9 for every q above 1e4, so
    // the exponential branch may start right at the c0 split.
    out.c0 = 1.0 / 160.0;
    const double lq = std::log(static_cast<double>(q));
    out.log_x0 = 0.03 * std::sqrt(static_cast<double>(q)) * lq * lq * lq;
    out.x0 = std::exp(out.log_x0);  // +inf beyond double range
  }
  return out;
}

const char* to_string(ApBoundSource source) {
  switch (source) {
    case ApBoundSource::BennettMain: return "bennett_main";
    case ApBoundSource::SmallModulus: return "small_modulus";
    case ApBoundSource::SqrtWindow: return "sqrt_window";
  }
  return "unknown";
}

ApErrorBound ap_error_bound(double x, u64 q) {
  if (!(x >= 2.0)) throw DomainError("ap_error_bound: requires x >= 2");
  if (q < 1) throw DomainError("ap_error_bound: requires q >= 1");
  const double L = std::log(x);
  bool found = false;
  ApErrorBound best{0, ApBoundSource::BennettMain};

  auto consider = [&](double value, ApBoundSource source) {
    if (!found || value < best.bound) best = {value, source};
    found = true;
  };

  if (q >= 3) {
    const BennettConstants bc = bennett_constants(q);
    if (L >= bc.log_x0) consider(bc.c0 * x / (L * L), ApBoundSource::BennettMain);
  }
  if (q <= 100'000 && x >= 1e6)
    consider(kSmallModulusCoeff * x / (L * L), ApBoundSource::SmallModulus);
  if (q >= 100 && q <= 10'000 && x <= 1e11)
    consider(kSqrtWindowCoeff * std::sqrt(x) / L, ApBoundSource::SqrtWindow);

  if (!found)
    throw NoApplicableLemma("ap_error_bound: no validity window contains (x, q)");
  return best;
}

namespace {

CaseLabel label_for_K(double K) {
  if (K == 155.0) return CaseLabel::CaseII;
  if (K == 4.2) return CaseLabel::CaseIII;
  if (K == 210.0) return CaseLabel::CaseV;
  throw DomainError("short_interval_margin: K must be 155, 4.2 or 210");
}

}  // namespace

MarginReport short_interval_margin(double g, double log_b, double K, double) {
  MarginReport report;
  report.label = label_for_K(K);
  if (!(log_b > 0)) throw DomainError("short_interval_margin: log_b must be positive");
  const double L = std::log(g);
  const double c = g / L;
  const double shifted = g - c;
  if (!(g >= 59.0) || !(shifted >= 59.0))
    throw DomainError("short_interval_margin: both window ends must be >= 59");

  const auto [lower_g, upper_g] = panaitopol_bounds(g);
  (void)upper_g;
  const double upper_shifted = panaitopol_bounds(shifted).second;

  report.main_term = lower_g;
  report.deductions = {
      {"panaitopol_upper_shifted", upper_shifted},
      {"representable_quadratic", g / (2.0 * L * L)},
      {"representable_step", g / (K * log_b * L)},
      {"representable_generator_b", std::sqrt(g) / L},
      {"one", 1.0},
  };
  report.margin = report.recomputed_margin();
  report.safety_slack = slack_for(report.main_term);
  if (g <= 9e18) report.g = static_cast<u64>(g);
  return report;
}

double short_interval_margin_tail(double g, double K) {
  if (!(g > 1e18)) throw DomainError("short_interval_margin_tail: requires g > 1e18");
  label_for_K(K);  // same K domain as the direct form
  const double L = std::log(g);
  const double coeff = 0.25 - 2.0 / K;  // 147/620 for K = 155
  return coeff * g / (L * L) - g / std::pow(L, 2.5) + 1.25 * g / (L * L * L) -
         std::sqrt(g) / L - 1.0;
}

MarginReport case_margin_unchecked(CaseLabel variant, double a, double b, double g,
                                   double phi_a, double rel_tol) {
  MarginReport report;
  report.label = variant;
  const double L = std::log(g);
  switch (variant) {
    case CaseLabel::CaseI:
      report.main_term = (g - b) / (4.2 * L * L);
      report.deductions = {{"ap_error_twice", g / (80.0 * L * L)}};
      break;
    case CaseLabel::CaseIV:
      report.main_term = (g - b) / (phi_a * L);
      report.deductions = {{"ap_error_twice", g / (420.0 * L * L)}};
      break;
    case CaseLabel::CaseVI: {
      const double window = log_integral(g, rel_tol) - log_integral(b, rel_tol);
      const double Lb = std::log(b);
      report.main_term = window / phi_a;
      report.deductions = {
          {"ap_error_g", kSmallModulusCoeff * g / (L * L)},
          {"ap_error_b", kSmallModulusCoeff * b / (Lb * Lb)},
      };
      break;
    }
    case CaseLabel::CaseVII:
      report.main_term = log_integral(g, rel_tol) / phi_a;
      report.deductions = {
          {"trivial_pi_b", b / a + 1.0},
          {"ap_error_g", g / (840.0 * L * L)},
      };
      break;
    case CaseLabel::CaseVIII: {
      const double window = log_integral(g, rel_tol) - log_integral(b, rel_tol);
      report.main_term = window / phi_a;
      report.deductions = {{"ap_error_sqrt", 5.5 * std::sqrt(g) / L}};
      break;
    }
    default:
      throw WrongRegion("case_margin_unchecked: variant has no AP-count margin chain");
  }
  report.margin = report.recomputed_margin();
  report.safety_slack = slack_for(report.main_term);
  return report;
}

MarginReport ap_count_margin(const GeneratorPair& pair, CaseLabel variant,
                             double rel_tol) {
  const double a = static_cast<double>(pair.a);
  const double b = static_cast<double>(pair.b);
  const double lb = std::log(b);
  bool ok = false;
  switch (variant) {
    case CaseLabel::CaseI:
      ok = pair.a > 10'000 && a <= 4.2 * lb;
      break;
    case CaseLabel::CaseIV:
      ok = pair.a >= 4 && pair.a <= 10'000 && pair.b > 8'000'000'000ULL &&
           a <= 210.0 * lb;
      break;
    case CaseLabel::CaseVI:
      ok = pair.a >= 4 && pair.a <= 808 && pair.b >= 1'000'000 &&
           pair.b <= 8'000'000'000ULL;
      break;
    case CaseLabel::CaseVII:
      ok = pair.a > 808 && pair.a <= 10'000 &&
           b > 8e9 / (a - 1.0) + 1.0 && pair.b <= 8'000'000'000ULL;
      break;
    case CaseLabel::CaseVIII:
      ok = pair.a > 808 && pair.a <= 10'000 && pair.b >= 1'000'000 &&
           pair.b <= 10'000'000;
      break;
    default:
      throw WrongRegion("ap_count_margin: variant is not an AP-count case");
  }
  if (!ok) throw WrongRegion("ap_count_margin: pair violates the variant's region");

  MarginReport report = case_margin_unchecked(
      variant, a, b, static_cast<double>(pair.g), static_cast<double>(pair.phi_a),
      rel_tol);
  report.a = pair.a;
  report.b = pair.b;
  report.g = pair.g;
  return report;
}

}  // namespace frobcert
