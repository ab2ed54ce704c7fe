#include "frobcert/casework.hpp"

#include <cmath>

#include "frobcert/sieve.hpp"

namespace frobcert {

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::EdgeA2: return "EdgeA2";
    case CaseLabel::PrimeGenerator: return "PrimeGenerator";
    case CaseLabel::CaseI: return "CaseI";
    case CaseLabel::CaseII: return "CaseII";
    case CaseLabel::CaseIII: return "CaseIII";
    case CaseLabel::CaseIV: return "CaseIV";
    case CaseLabel::CaseV: return "CaseV";
    case CaseLabel::CaseVI: return "CaseVI";
    case CaseLabel::CaseVII: return "CaseVII";
    case CaseLabel::CaseVIII: return "CaseVIII";
    case CaseLabel::ResidualI: return "ResidualI";
    case CaseLabel::ResidualIII: return "ResidualIII";
  }
  return "unknown";
}

std::optional<CaseLabel> case_label_from_string(std::string_view s) {
  static constexpr CaseLabel all[] = {
      CaseLabel::EdgeA2,  CaseLabel::PrimeGenerator, CaseLabel::CaseI,
      CaseLabel::CaseII,  CaseLabel::CaseIII,        CaseLabel::CaseIV,
      CaseLabel::CaseV,   CaseLabel::CaseVI,         CaseLabel::CaseVII,
      CaseLabel::CaseVIII, CaseLabel::ResidualI,     CaseLabel::ResidualIII,
  };
  for (CaseLabel label : all)
    if (s == to_string(label)) return label;
  return std::nullopt;
}

namespace detail {

// Shared by classify() and the verifier's enumeration fast path.
CaseLabel classify_raw(u64 a, u64 b, u64 g, bool a_prime, bool b_prime) {
  if (a == 2) return CaseLabel::EdgeA2;
  if (a_prime || b_prime) return CaseLabel::PrimeGenerator;
  const double ad = static_cast<double>(a);
  const double lb = std::log(static_cast<double>(b));
  if (a > 10'000) {
    if (ad <= 4.2 * lb) return CaseLabel::CaseI;
    if (ad < 155.0 * lb) return CaseLabel::CaseIII;
    return g > 500'000'000ULL ? CaseLabel::CaseII : CaseLabel::ResidualI;
  }
  if (b > 8'000'000'000ULL)
    return ad <= 210.0 * lb ? CaseLabel::CaseIV : CaseLabel::CaseV;
  if (b >= 1'000'000) {
    if (a <= 808) return CaseLabel::CaseVI;
    return b <= 10'000'000 ? CaseLabel::CaseVIII : CaseLabel::CaseVII;
  }
  return CaseLabel::ResidualIII;
}

}  // namespace detail

CaseLabel classify(const GeneratorPair& pair) {
  return detail::classify_raw(pair.a, pair.b, pair.g, pair.a_is_prime,
                              pair.b_is_prime);
}

bool in_region(CaseLabel label, const GeneratorPair& pair) {
  const double a = static_cast<double>(pair.a);
  const double lb = std::log(static_cast<double>(pair.b));
  switch (label) {
    case CaseLabel::EdgeA2:
      return pair.a == 2;
    case CaseLabel::PrimeGenerator:
      return pair.a_is_prime || pair.b_is_prime;
    case CaseLabel::CaseI:
      return pair.a > 10'000 && a <= 4.2 * lb;
    case CaseLabel::CaseII:
      return pair.a > 10'000 && a >= 155.0 * lb && pair.g > 500'000'000ULL;
    case CaseLabel::CaseIII:
      return pair.a > 10'000 && 4.2 * lb < a && a < 155.0 * lb;
    case CaseLabel::CaseIV:
      return pair.a >= 4 && pair.a <= 10'000 && pair.b > 8'000'000'000ULL &&
             a <= 210.0 * lb;
    case CaseLabel::CaseV:
      return pair.a >= 4 && pair.a <= 10'000 && pair.b > 8'000'000'000ULL &&
             a > 210.0 * lb;
    case CaseLabel::CaseVI:
      return pair.a >= 4 && pair.a <= 808 && pair.b >= 1'000'000 &&
             pair.b <= 8'000'000'000ULL;
    case CaseLabel::CaseVII:
      return pair.a > 808 && pair.a <= 10'000 && pair.b <= 8'000'000'000ULL &&
             static_cast<double>(pair.b) > 8e9 / (a - 1.0) + 1.0;
    case CaseLabel::CaseVIII:
      return pair.a > 808 && pair.a <= 10'000 && pair.b >= 1'000'000 &&
             pair.b <= 10'000'000;
    case CaseLabel::ResidualI:
      return pair.a > 10'000 && pair.g <= 500'000'000ULL && a >= 155.0 * lb;
    case CaseLabel::ResidualIII:
      return pair.a <= 10'000 && pair.b < 1'000'000;
  }
  return false;
}

namespace {

// Deterministic witness search: y = 1 ascending x, then y = 0, 2, 3, ...
// Returns the first representable prime <= g found in that order.
std::optional<WitnessCertificate> search_witness(const GeneratorPair& pair) {
  const u64 a = pair.a, b = pair.b, g = pair.g;
  if (b <= g) {
    if (auto p = first_prime_in_ap(b, a, g))
      return WitnessCertificate{*p, {(*p - b) / a, 1, *p}};
  }
  if (a <= g && pair.a_is_prime)
    return WitnessCertificate{a, {1, 0, a}};
  for (u64 y = 2; y <= g / b; ++y) {
    const u64 start = b * y;
    if (auto p = first_prime_in_ap(start, a, g))
      return WitnessCertificate{*p, {(*p - start) / a, y, *p}};
  }
  return std::nullopt;
}

// Margin evaluation for an analytic label; short-interval cases use the
// pair's actual log b (always sharper than the b-free sweep).
MarginReport evaluate_margin(const GeneratorPair& pair, CaseLabel label,
                             double rel_tol) {
  switch (label) {
    case CaseLabel::CaseII:
    case CaseLabel::CaseIII:
    case CaseLabel::CaseV: {
      const double K = label == CaseLabel::CaseII  ? 155.0
                       : label == CaseLabel::CaseIII ? 4.2
                                                     : 210.0;
      MarginReport report = short_interval_margin(
          static_cast<double>(pair.g), std::log(static_cast<double>(pair.b)), K,
          rel_tol);
      report.a = pair.a;
      report.b = pair.b;
      report.g = pair.g;
      return report;
    }
    default:
      return ap_count_margin(pair, label, rel_tol);
  }
}

bool is_analytic_label(CaseLabel label) {
  switch (label) {
    case CaseLabel::CaseI:
    case CaseLabel::CaseII:
    case CaseLabel::CaseIII:
    case CaseLabel::CaseIV:
    case CaseLabel::CaseV:
    case CaseLabel::CaseVI:
    case CaseLabel::CaseVII:
    case CaseLabel::CaseVIII:
      return true;
    default:
      return false;
  }
}

// Primality check independent of the strong-probable-prime path: trial
// division wherever the divisor range is feasible.
bool verified_prime(u64 p) {
  if (p <= kSieveCeiling) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    if (p % 3 == 0) return p == 3;
    for (u64 d = 5; d * d <= p; d += 6) {
      if (p % d == 0 || p % (d + 2) == 0) return false;
    }
    return true;
  }
  return is_prime(p);
}

}  // namespace

Certificate certify(const GeneratorPair& pair) {
  Certificate cert;
  cert.pair = pair;
  cert.label = classify(pair);
  cert.issued_at = std::chrono::system_clock::now();

  switch (cert.label) {
    case CaseLabel::EdgeA2:
      if (pair.b == 3)
        throw NoCertificate("(2,3): g = 1, the interval [0, g] holds no prime");
      cert.body = WitnessCertificate{2, {1, 0, 2}};  // 2 = 2*1 + b*0
      return cert;
    case CaseLabel::PrimeGenerator:
      if (pair.a_is_prime)
        cert.body = WitnessCertificate{pair.a, {1, 0, pair.a}};
      else
        cert.body = WitnessCertificate{pair.b, {0, 1, pair.b}};
      return cert;
    default:
      break;
  }

  if (is_analytic_label(cert.label)) {
    try {
      MarginReport report = evaluate_margin(pair, cert.label, default_quadrature_tol());
      if (report.certifies()) {
        cert.body = std::move(report);
        return cert;
      }
    } catch (const Error&) {
      // fall through to witness search
    }
  }

  if (auto witness = search_witness(pair)) {
    cert.body = *witness;
    return cert;
  }
  throw NoCertificate("no analytic margin and no prime witness found");
}

bool verify_certificate(const Certificate& cert) {
  try {
    const GeneratorPair fresh = make_pair(cert.pair.a, cert.pair.b);
    if (fresh.g != cert.pair.g) return false;
    if (classify(fresh) != cert.label) return false;

    if (cert.is_witness()) {
      const WitnessCertificate& w = cert.witness();
      if (w.p > fresh.g || w.rep.n != w.p) return false;
      const u128 combined = u128{fresh.a} * w.rep.x + u128{fresh.b} * w.rep.y;
      if (combined != u128{w.p}) return false;
      return verified_prime(w.p);
    }

    if (!is_analytic_label(cert.label)) return false;
    if (!in_region(cert.label, fresh)) return false;
    const MarginReport& claimed = cert.margin();
    if (std::fabs(claimed.recomputed_margin() - claimed.margin) >
        1e-9 * std::max(1.0, std::fabs(claimed.margin)))
      return false;

    const MarginReport again =
        evaluate_margin(fresh, cert.label, default_quadrature_tol() / 10.0);
    if (!again.certifies()) return false;
    if (again.deductions.size() != claimed.deductions.size()) return false;
    for (size_t i = 0; i < again.deductions.size(); ++i) {
      if (again.deductions[i].name != claimed.deductions[i].name) return false;
      const double diff =
          std::fabs(again.deductions[i].value - claimed.deductions[i].value);
      if (diff > 1e-6 * std::max(1.0, std::fabs(again.deductions[i].value)))
        return false;
    }
    return std::fabs(again.margin - claimed.margin) <=
           1e-6 * std::max(1.0, std::fabs(again.margin));
  } catch (const Error&) {
    return false;
  }
}

}  // namespace frobcert
