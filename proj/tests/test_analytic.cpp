#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "frobcert/analytic.hpp"
#include "frobcert/semigroup.hpp"
#include "frobcert/sieve.hpp"
#include "oracles.hpp"

using namespace frobcert;
using doctest::Approx;

TEST_CASE("log_integral against the fixed-step long double oracle") {
  CHECK(log_integral(2.0) == 0.0);
  CHECK(log_integral(10.0) == Approx(5.1204357246698052).epsilon(1e-11));
  CHECK(log_integral(100.0) == Approx(29.080977803962137).epsilon(1e-11));
  CHECK(log_integral(1e6) == Approx(78626.503995682064).epsilon(1e-11));
  CHECK(log_integral(8e9) == Approx(367788894.63503928).epsilon(1e-11));
  for (double x : {13.0, 5e3, 2.5e7, 1e11}) {
    const double want = static_cast<double>(oracle::li(x));
    CHECK(log_integral(x) == Approx(want).epsilon(1e-10));
  }
  CHECK_THROWS_AS(log_integral(1.5), DomainError);
  CHECK_THROWS_AS(log_integral(-3.0), DomainError);
}

TEST_CASE("log_integral monotonicity and the integrand lower bound") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dx(2.0, 1e9);
  for (int i = 0; i < 50; ++i) {
    double x = dx(rng), y = dx(rng);
    if (x < y) std::swap(x, y);
    if (x == y) continue;
    const double lix = log_integral(x), liy = log_integral(y);
    CHECK(lix > liy);
    // 1/log t >= 1/log x on [y, x]
    CHECK(lix - liy >= (x - y) / std::log(x) - 1e-9 * lix);
  }
}

TEST_CASE("panaitopol_bounds") {
  const auto [lo100, hi100] = panaitopol_bounds(100.0);
  CHECK(lo100 == Approx(24.563019053518648).epsilon(1e-12));
  CHECK(hi100 == Approx(31.855456917217086).epsilon(1e-12));
  CHECK(lo100 < 25.0);
  CHECK(hi100 > 25.0);

  const auto [lo59, hi59] = panaitopol_bounds(59.0);
  CHECK(lo59 < 17.0);
  CHECK(hi59 > 17.0);

  CHECK_THROWS_AS(panaitopol_bounds(58.999), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dx(59.0, 1e15);
  for (int i = 0; i < 100; ++i) {
    const auto [lo, hi] = panaitopol_bounds(dx(rng));
    CHECK(lo < hi);
  }
}

TEST_CASE("panaitopol brackets sieve counts at sample points") {
  for (u64 x : {u64{59}, u64{100}, u64{10'000}, u64{1'000'000}}) {
    const double pi_x = static_cast<double>(prime_count(x));
    const auto [lo, hi] = panaitopol_bounds(static_cast<double>(x));
    CHECK(lo < pi_x);
    CHECK(pi_x < hi);
  }
}

TEST_CASE("bennett_constants piecewise definition") {
  const auto b100 = bennett_constants(100);
  CHECK(b100.c0 == 1.0 / 840.0);
  CHECK(b100.x0 == 8e9);
  CHECK(b100.log_x0 == Approx(std::log(8e9)).epsilon(1e-15));

  const auto b1e4 = bennett_constants(10'000);  // boundary inclusive
  CHECK(b1e4.c0 == 1.0 / 840.0);
  CHECK(b1e4.x0 == 8e9);

  const auto bq = bennett_constants(10'001);
  CHECK(bq.c0 == 1.0 / 160.0);
  const double lq = std::log(10001.0);
  CHECK(bq.log_x0 == Approx(0.03 * std::sqrt(10001.0) * lq * lq * lq).epsilon(1e-15));
  CHECK(std::isinf(bq.x0));  // exp(2344...) overflows double, log_x0 stays usable
  CHECK(bq.log_x0 > std::log(8e9));

  CHECK_THROWS_AS(bennett_constants(2), DomainError);
}

TEST_CASE("ap_error_bound picks the sharpest applicable source") {
  {
    // all three windows contain (1e10, 500); sqrt bound wins
    const auto eb = ap_error_bound(1e10, 500);
    const double L = std::log(1e10);
    CHECK(eb.source == ApBoundSource::SqrtWindow);
    CHECK(eb.bound == Approx(2.734 * 1e5 / L).epsilon(1e-14));
    CHECK(eb.bound < (1.0 / 840.0) * 1e10 / (L * L));
    CHECK(eb.bound < 0.027 * 1e10 / (L * L));
  }
  {
    const auto eb = ap_error_bound(1e6, 1000);
    const double L = std::log(1e6);
    CHECK(eb.source == ApBoundSource::SmallModulus);
    CHECK(eb.bound == Approx(0.027 * 1e6 / (L * L)).epsilon(1e-14));
    CHECK(eb.bound < 2.734 * 1e3 / L);
  }
  {
    // sqrt window closed (x > 1e11); Bennett main beats the 0.027 bound
    const auto eb = ap_error_bound(1e12, 500);
    const double L = std::log(1e12);
    CHECK(eb.source == ApBoundSource::BennettMain);
    CHECK(eb.bound == Approx((1.0 / 840.0) * 1e12 / (L * L)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(ap_error_bound(1e5, 3), NoApplicableLemma);
  CHECK_THROWS_AS(ap_error_bound(1.0, 3), DomainError);
}

TEST_CASE("short_interval_margin reproduces the swept minimum") {
  const double g0 = 5e8;
  const MarginReport at_min = short_interval_margin(g0, std::log(std::sqrt(g0)), 155.0);
  CHECK(at_min.label == CaseLabel::CaseII);
  CHECK(at_min.margin == Approx(566.0054846).epsilon(1e-7));
  CHECK(at_min.certifies());
  CHECK(at_min.margin == Approx(at_min.recomputed_margin()).epsilon(1e-15));
  CHECK(at_min.deductions.size() == 5);

  const MarginReport big = short_interval_margin(1e12, std::log(std::sqrt(1e12)), 155.0);
  CHECK(big.margin > 0);
  CHECK(big.margin == Approx(109350292.4).epsilon(1e-6));

  // the CaseIII region floor: g = exp(1e4/155) with b just below g
  const double g3 = std::exp(1e4 / 155.0);
  const MarginReport third = short_interval_margin(g3, std::log(g3), 4.2);
  CHECK(third.label == CaseLabel::CaseIII);
  CHECK(third.margin > 0);
  CHECK(third.margin == Approx(1.705122994e22).epsilon(1e-6));

  const MarginReport fifth = short_interval_margin(2e10, std::log(std::sqrt(2e10)), 210.0);
  CHECK(fifth.label == CaseLabel::CaseV);
  CHECK(fifth.margin > 0);

  CHECK_THROWS_AS(short_interval_margin(5e8, std::log(5e8), 100.0), DomainError);
  CHECK_THROWS_AS(short_interval_margin(70.0, 2.0, 155.0), DomainError);  // g - c < 59
  CHECK_THROWS_AS(short_interval_margin(5e8, -1.0, 155.0), DomainError);
}

TEST_CASE("short_interval_margin positive on a log sweep of [5e8, 1e18]") {
  const double lo = std::log(5e8), hi = std::log(1e18);
  double min_val = 1e300;
  std::size_t min_idx = 999;
  for (std::size_t i = 0; i < 120; ++i) {
    const double g = std::exp(lo + (hi - lo) * static_cast<double>(i) / 119.0);
    const double f = short_interval_margin(g, std::log(std::sqrt(g)), 155.0).margin;
    CHECK(f > 0);
    if (f < min_val) {
      min_val = f;
      min_idx = i;
    }
  }
  CHECK(min_idx == 0);
}

TEST_CASE("short_interval_margin_tail is a lower bound past 1e18") {
  CHECK_THROWS_AS(short_interval_margin_tail(1e18, 155.0), DomainError);
  CHECK(short_interval_margin_tail(1.000001e18, 155.0) > 0);
  CHECK(short_interval_margin_tail(1e19, 155.0) == Approx(5.981313198e14).epsilon(1e-6));

  // coefficient identity for the derived leading term
  CHECK(0.25 - 2.0 / 155.0 == Approx(147.0 / 620.0).epsilon(1e-15));

  for (double K : {155.0, 210.0}) {
    for (double g : {1.000001e18, 1e19, 1e21, 1e24}) {
      const double tail = short_interval_margin_tail(g, K);
      const double direct = short_interval_margin(g, std::log(std::sqrt(g)), K).margin;
      CHECK(tail <= direct);
      if (K == 155.0) CHECK(tail > 0);
    }
  }
}

TEST_CASE("ap_count_margin case VI reproduces the reported minimum") {
  const MarginReport m = ap_count_margin(make_pair(797, 1'000'000), CaseLabel::CaseVI);
  CHECK(m.margin == Approx(42.5024616419).epsilon(2e-5));
  CHECK(std::fabs(m.margin - 42.5025) < 0.5);
  CHECK(m.certifies());
  CHECK(m.a == 797);
  CHECK(m.deductions.size() == 2);
  CHECK(m.margin == Approx(m.recomputed_margin()).epsilon(1e-15));
}

TEST_CASE("ap_count_margin case VIII reproduces the reported minimum") {
  const MarginReport m = ap_count_margin(make_pair(9973, 1'000'000), CaseLabel::CaseVIII);
  CHECK(m.margin == Approx(21647.8287364).epsilon(2e-5));
  CHECK(std::fabs(m.margin - 21647.8) < 216.478);  // 1 percent
  CHECK(m.certifies());
}

TEST_CASE("ap_count_margin case VII positive across its region") {
  const MarginReport m = ap_count_margin(make_pair(809, 8'000'000'000ULL), CaseLabel::CaseVII);
  CHECK(m.margin == Approx(262370322.082).epsilon(1e-6));
  CHECK(m.certifies());
}

TEST_CASE("ap_count_margin case IV positive with closed-form terms") {
  // first composite b > 8e9 coprime to a
  const u64 a = 4002;
  u64 b = 8'000'000'001ULL;
  while (std::gcd(a, b) != 1 || is_prime(b)) ++b;
  const GeneratorPair pair = make_pair(a, b);
  const MarginReport m = ap_count_margin(pair, CaseLabel::CaseIV);
  const double L = std::log(static_cast<double>(pair.g));
  CHECK(m.main_term ==
        Approx(static_cast<double>(pair.g - pair.b) /
               (static_cast<double>(pair.phi_a) * L))
            .epsilon(1e-15));
  CHECK(m.deductions.size() == 1);
  CHECK(m.deductions[0].value ==
        Approx(static_cast<double>(pair.g) / (420.0 * L * L)).epsilon(1e-15));
  CHECK(m.certifies());
}

TEST_CASE("ap_count_margin rejects pairs outside the variant region") {
  CHECK_THROWS_AS(ap_count_margin(make_pair(3, 10), CaseLabel::CaseVI), WrongRegion);
  CHECK_THROWS_AS(ap_count_margin(make_pair(799, 999'983), CaseLabel::CaseVI), WrongRegion);
  CHECK_THROWS_AS(ap_count_margin(make_pair(799, 1'000'005), CaseLabel::CaseVIII), WrongRegion);
  CHECK_THROWS_AS(ap_count_margin(make_pair(797, 1'000'000), CaseLabel::CaseII), WrongRegion);
  // CaseI needs b beyond 64-bit width, so every constructible pair is outside
  CHECK_THROWS_AS(ap_count_margin(make_pair(10007, 10'000'019), CaseLabel::CaseI), WrongRegion);
}

TEST_CASE("case I chain on synthetic reals: 80(g-b) - 4.2 g stays positive") {
  // at the region boundary a = 4.2 log b the paper pins b = (g+a)/(a-1);
  // scaled variants keep the deduction dominated
  for (double a : {10001.0, 20000.0, 1e5}) {
    const double g = 1e30;
    const double b = (g + a) / (a - 1.0);
    const MarginReport m = case_margin_unchecked(CaseLabel::CaseI, a, b, g, a - 1.0);
    CHECK(80.0 * (g - b) - 4.2 * g > 0);
    CHECK(m.margin > 0);
    const double L = std::log(g);
    CHECK(m.main_term == Approx((g - b) / (4.2 * L * L)).epsilon(1e-15));
    CHECK(m.deductions[0].value == Approx(g / (80.0 * L * L)).epsilon(1e-15));
  }
}

TEST_CASE("case VI margin positive on the sampled region grid (subset)") {
  for (u64 a = 4; a <= 808; a += 201) {
    for (double bf : {1e6, 3.2e7, 8e9}) {
      u64 b = static_cast<u64>(bf);
      // nudge toward the region interior until coprime
      while (std::gcd(a, b) != 1) b += (bf < 8e9) ? 1 : -1;
      const MarginReport m = ap_count_margin(make_pair(a, b), CaseLabel::CaseVI);
      CHECK(m.margin > 0);
    }
  }
}

TEST_CASE("empirical AP error bounds at desk scale (subset)") {
  // counts per residue for q up to 160 in one streaming pass to 1e6
  const u64 x = 1'000'000;
  static u64 counts[161][161];
  for (auto& row : counts)
    for (auto& v : row) v = 0;
  SegmentedSieve sieve;
  sieve.for_each_prime(2, x, [&](u64 p) {
    for (u64 q = 3; q <= 160; ++q) ++counts[q][p % q];
  });
  const double li_x = log_integral(static_cast<double>(x));
  const double L = std::log(static_cast<double>(x));

  for (u64 q : {u64{3}, u64{7}, u64{10}, u64{57}, u64{100}}) {
    const double expected = li_x / static_cast<double>(euler_phi(q));
    for (u64 m = 0; m < q; ++m) {
      if (std::gcd(m, q) != 1) continue;
      const double err = std::fabs(static_cast<double>(counts[q][m]) - expected);
      CHECK(err < 0.027 * static_cast<double>(x) / (L * L));
    }
  }
  for (u64 q : {u64{101}, u64{140}, u64{157}}) {
    const double expected = li_x / static_cast<double>(euler_phi(q));
    for (u64 m = 0; m < q; ++m) {
      if (std::gcd(m, q) != 1) continue;
      const double err = std::fabs(static_cast<double>(counts[q][m]) - expected);
      CHECK(err < 2.734 * std::sqrt(static_cast<double>(x)) / L);
    }
  }
}

TEST_CASE("margin reports always satisfy their own recomputation invariant") {
  std::vector<MarginReport> reports;
  reports.push_back(short_interval_margin(7e8, std::log(std::sqrt(7e8)), 155.0));
  reports.push_back(ap_count_margin(make_pair(797, 1'000'000), CaseLabel::CaseVI));
  reports.push_back(ap_count_margin(make_pair(9973, 1'000'000), CaseLabel::CaseVIII));
  for (const auto& m : reports) {
    CHECK(std::fabs(m.recomputed_margin() - m.margin) <=
          1e-12 * std::max(1.0, std::fabs(m.margin)));
    CHECK(m.safety_slack == std::max(1.0, 1e-9 * m.main_term));
  }
}
