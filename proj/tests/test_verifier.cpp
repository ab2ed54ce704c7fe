#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "frobcert/sieve.hpp"
#include "frobcert/verifier.hpp"
#include "oracles.hpp"

using namespace frobcert;

namespace {

bool reports_equal(const RangeReport& x, const RangeReport& y) {
  if (x.pairs_total != y.pairs_total) return false;
  if (x.pairs_skipped_noncoprime != y.pairs_skipped_noncoprime) return false;
  if (x.pairs_skipped_filtered != y.pairs_skipped_filtered) return false;
  if (x.pairs_prime_generator != y.pairs_prime_generator) return false;
  if (x.pairs_witnessed != y.pairs_witnessed) return false;
  if (x.pairs_analytic != y.pairs_analytic) return false;
  if (x.max_search_depth != y.max_search_depth) return false;
  if (x.non_y1_witnesses != y.non_y1_witnesses) return false;
  if (x.failures.size() != y.failures.size()) return false;
  for (size_t i = 0; i < x.failures.size(); ++i) {
    if (x.failures[i].a != y.failures[i].a || x.failures[i].b != y.failures[i].b ||
        x.failures[i].reason != y.failures[i].reason)
      return false;
  }
  return true;
}

std::string temp_path(const char* tag) {
  std::ostringstream os;
  os << "frobcert_test_" << tag << "_" << ::getpid() << ".ck";
  return os.str();
}

// keep only the prefix of the checkpoint up to and including the n-th
// shard marker, simulating a kill at a shard boundary
void truncate_after_markers(const std::string& path, int keep) {
  std::ifstream in(path);
  REQUIRE(in);
  std::vector<std::string> lines;
  std::string line;
  int markers = 0;
  while (std::getline(in, line)) {
    lines.push_back(line);
    if (line.rfind("#shard,", 0) == 0 && ++markers == keep) break;
  }
  in.close();
  std::ofstream out(path, std::ios::trunc);
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("verify_range certifies a desk rectangle") {
  RangeJob job;
  job.a_lo = 3;
  job.a_hi = 100;
  job.b_lo = 4;
  job.b_hi = 200;
  const RangeReport r = verify_range(job);
  CHECK(r.all_passed());
  CHECK(r.counters_consistent());
  CHECK(r.pairs_analytic == 0);  // b < 1e6 throughout
  CHECK(r.non_y1_witnesses == 0);

  // certified outcomes must cover exactly the coprime pairs
  u64 coprime = 0, total = 0;
  for (u64 a = 3; a <= 100; ++a)
    for (u64 b = std::max(a + 1, u64{4}); b <= 200; ++b) {
      ++total;
      if (std::gcd(a, b) == 1) ++coprime;
    }
  CHECK(r.pairs_total == total);
  CHECK(r.pairs_prime_generator + r.pairs_witnessed + r.pairs_analytic == coprime);
  CHECK(r.pairs_skipped_noncoprime == total - coprime);
}

TEST_CASE("verify_range matches brute-force positivity on samples") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<u64> d(3, 120);
  int done = 0;
  while (done < 25) {
    const u64 a = d(rng), b = d(rng);
    if (a >= b || std::gcd(a, b) != 1) continue;
    ++done;
    CHECK(oracle::pi_ab_brute(a, b) > 0);
  }
}

TEST_CASE("report counters are independent of shard count") {
  RangeJob job;
  job.a_lo = 3;
  job.a_hi = 60;
  job.b_lo = 4;
  job.b_hi = 400;
  job.shard_count = 1;
  const RangeReport r1 = verify_range(job);
  job.shard_count = 4;
  const RangeReport r4 = verify_range(job);
  job.shard_count = 16;
  const RangeReport r16 = verify_range(job);
  CHECK(reports_equal(r1, r4));
  CHECK(reports_equal(r4, r16));
  CHECK(r1.pairs_total > 10'000);
}

TEST_CASE("rectangles containing (2,3) report it as the one failure") {
  RangeJob job;
  job.a_lo = 2;
  job.a_hi = 2;
  job.b_lo = 3;
  job.b_hi = 12;
  const RangeReport r = verify_range(job);
  CHECK(r.counters_consistent());
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].a == 2);
  CHECK(r.failures[0].b == 3);
  // odd b > 3 all witnessed by p = 2; even b noncoprime
  CHECK(r.pairs_witnessed == 4);  // b in {5, 7, 9, 11}
  CHECK(r.pairs_skipped_noncoprime == 5);
}

TEST_CASE("region filter splits outcomes deterministically") {
  RangeJob job;
  job.a_lo = 3;
  job.a_hi = 40;
  job.b_lo = 4;
  job.b_hi = 120;
  job.region_filter = CaseLabel::PrimeGenerator;
  const RangeReport filtered = verify_range(job);
  CHECK(filtered.counters_consistent());
  CHECK(filtered.pairs_witnessed == 0);
  CHECK(filtered.pairs_prime_generator > 0);
  CHECK(filtered.pairs_skipped_filtered > 0);

  job.region_filter = CaseLabel::ResidualIII;
  const RangeReport residual = verify_range(job);
  CHECK(residual.pairs_prime_generator == 0);
  CHECK(residual.pairs_witnessed > 0);

  RangeJob plain = job;
  plain.region_filter.reset();
  const RangeReport all = verify_range(plain);
  CHECK(all.pairs_prime_generator == filtered.pairs_prime_generator);
  CHECK(all.pairs_witnessed == residual.pairs_witnessed);
}

TEST_CASE("checkpoint resume reproduces the uninterrupted report") {
  const std::string path = temp_path("resume");
  RangeJob job;
  job.a_lo = 3;
  job.a_hi = 52;
  job.b_lo = 4;
  job.b_hi = 250;
  job.shard_count = 10;

  const RangeReport baseline = verify_range(job);

  job.checkpoint_path = path;
  const RangeReport with_ck = verify_range(job);
  CHECK(reports_equal(baseline, with_ck));

  // kill at a shard boundary: keep 4 of 10 shard blocks, then resume
  truncate_after_markers(path, 4);
  RangeJob resume_job = job;
  resume_job.resume = true;
  const RangeReport resumed = verify_range(resume_job);
  CHECK(reports_equal(baseline, resumed));

  // resuming a complete checkpoint re-certifies nothing and still matches
  const RangeReport again = verify_range(resume_job);
  CHECK(reports_equal(baseline, again));

  std::remove(path.c_str());
}

TEST_CASE("checkpoint corruption is detected") {
  const std::string path = temp_path("corrupt");
  RangeJob job;
  job.a_lo = 3;
  job.a_hi = 20;
  job.b_lo = 4;
  job.b_hi = 60;
  job.shard_count = 4;
  job.checkpoint_path = path;
  verify_range(job);

  RangeJob resume_job = job;
  resume_job.resume = true;

  {  // job mismatch
    RangeJob other = resume_job;
    other.b_hi = 61;
    CHECK_THROWS_AS(verify_range(other), CheckpointCorrupt);
  }
  {  // shard count mismatch changes the header
    RangeJob other = resume_job;
    other.shard_count = 8;
    CHECK_THROWS_AS(verify_range(other), CheckpointCorrupt);
  }
  {  // mangled marker
    std::ifstream in(path);
    std::string all, line;
    while (std::getline(in, line)) {
      if (line.rfind("#shard,2,", 0) == 0) line = "#shard,2,done,not,a,number";
      all += line + "\n";
    }
    in.close();
    std::ofstream(path, std::ios::trunc) << all;
    CHECK_THROWS_AS(verify_range(resume_job), CheckpointCorrupt);
  }
  {  // missing file
    RangeJob other = resume_job;
    other.checkpoint_path = temp_path("nonexistent");
    CHECK_THROWS_AS(verify_range(other), CheckpointCorrupt);
  }
  std::remove(path.c_str());
}

TEST_CASE("verify_residual_iii slices") {
  const RangeReport r = verify_residual_iii(50, 2000);
  CHECK(r.all_passed());
  CHECK(r.counters_consistent());
  CHECK(r.pairs_witnessed > 0);
  CHECK(r.pairs_prime_generator == 0);  // filtered to ResidualIII
  CHECK(r.pairs_analytic == 0);

  const RangeReport empty = verify_residual_iii(3, 2000);
  CHECK(empty.pairs_total == 0);  // 3 is prime; composite a starts at 4

  CHECK_THROWS_AS(verify_residual_iii(20'000, 100), OutOfRange);
  CHECK_THROWS_AS(verify_residual_iii(100, 2'000'000), OutOfRange);
}

TEST_CASE("verify_residual_i on a narrow slice") {
  ResidualRunOptions opt;
  opt.a_hi_override = 10'020;
  opt.shard_count = 4;
  const RangeReport r = verify_residual_i(opt);
  CHECK(r.all_passed());
  CHECK(r.counters_consistent());
  CHECK(r.pairs_total > 100'000);
  CHECK(r.pairs_witnessed > 0);
  CHECK(r.pairs_analytic == 0);
  CHECK(r.pairs_prime_generator == 0);
  // footnote observation: y = 1 always suffices in region (i)
  CHECK(r.non_y1_witnesses == 0);
  CHECK(r.max_search_depth > 0);
}

TEST_CASE("conjecture2_ratio") {
  CHECK(conjecture2_ratio(make_pair(3, 5)) == 0.5);
  CHECK(conjecture2_ratio(make_pair(4, 7)) == doctest::Approx(2.0 / 7.0));
  CHECK(conjecture2_ratio(make_pair(2, 5)) == 0.5);  // g=3: primes {2,3}, repr {2}
  CHECK_THROWS_AS(conjecture2_ratio(make_pair(2, 3)), DegenerateG);
}

TEST_CASE("density ratio drifts toward 1/2 as a grows") {
  std::mt19937_64 rng(987654);
  auto mean_dev = [&rng](u64 lo, u64 hi, int want) {
    std::uniform_int_distribution<u64> d(lo, hi);
    double sum = 0;
    int done = 0;
    while (done < want) {
      const u64 a = d(rng), b = d(rng);
      if (a >= b || std::gcd(a, b) != 1) continue;
      const GeneratorPair pair = make_pair(a, b);
      if (pair.g < 2) continue;
      ++done;
      sum += std::fabs(conjecture2_ratio(pair) - 0.5);
    }
    return sum / want;
  };
  const double small = mean_dev(10, 50, 15);
  const double large = mean_dev(500, 2000, 15);
  CHECK(large < small);
  CHECK(large < 0.06);
}

TEST_CASE("range report JSON mirrors the counters") {
  RangeJob job;
  job.a_lo = 2;
  job.a_hi = 2;
  job.b_lo = 3;
  job.b_hi = 3;
  const RangeReport r = verify_range(job);
  const std::string json = range_report_to_json(r);
  CHECK(json ==
        "{\"pairs_total\":1,\"pairs_skipped_noncoprime\":0,"
        "\"pairs_skipped_filtered\":0,\"pairs_prime_generator\":0,"
        "\"pairs_witnessed\":0,\"pairs_analytic\":0,"
        "\"failures\":[{\"a\":2,\"b\":3,\"reason\":\"(2,3): g = 1, the interval "
        "[0, g] holds no prime\"}],\"max_search_depth\":0,"
        "\"non_y1_witnesses\":0,\"schema_version\":1}");
}
