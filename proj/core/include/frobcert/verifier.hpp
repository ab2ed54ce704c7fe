#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frobcert/casework.hpp"

namespace frobcert {

// A rectangle of pairs to certify, split into contiguous a-strips
// (shards). Shards are both the unit of parallelism and the unit of
// checkpoint resume.
struct RangeJob {
  u64 a_lo = 3;
  u64 a_hi = 0;
  u64 b_lo = 4;
  u64 b_hi = 0;
  // When set, the per-a b range is additionally capped so g <= g_cap.
  std::optional<u64> g_cap;
  // When set, only pairs classify() assigns this label are certified;
  // everything else is counted as filtered.
  std::optional<CaseLabel> region_filter;
  unsigned shard_count = 0;  // 0 = one shard per hardware thread, min 1
  std::string checkpoint_path;  // empty = no checkpointing
  bool resume = false;
};

struct RangeFailure {
  u64 a = 0;
  u64 b = 0;
  std::string reason;
};

// Outcome counters for a range run. failures empty <=> the run certifies
// the positivity theorem on the range.
struct RangeReport {
  u64 pairs_total = 0;
  u64 pairs_skipped_noncoprime = 0;
  u64 pairs_skipped_filtered = 0;
  u64 pairs_prime_generator = 0;
  u64 pairs_witnessed = 0;
  u64 pairs_analytic = 0;
  std::vector<RangeFailure> failures;  // sorted by (a, b)
  u64 max_search_depth = 0;   // largest x among y = 1 witnesses
  u64 non_y1_witnesses = 0;   // witnesses that needed y != 1
  double wall_time_sec = 0;   // excluded from json/csv serialization

  bool counters_consistent() const;
  bool all_passed() const { return failures.empty(); }
};

using ProgressFn = std::function<void(unsigned shards_done, unsigned shards_total)>;

// Certifies every coprime pair in the job's rectangle. The report is
// deterministic and independent of shard_count. NoCertificate outcomes
// become failure entries; they do not abort the run. Throws
// CheckpointCorrupt if the checkpoint cannot be read or does not match
// the job.
RangeReport verify_range(const RangeJob& job, const ProgressFn& progress = {});

struct ResidualRunOptions {
  unsigned shard_count = 0;
  std::string checkpoint_path;
  bool resume = false;
  // Test hook: truncate the a range (0 = full region).
  u64 a_hi_override = 0;
};

// Region (i): a > 1e4, g <= 5e8, a >= 155 log b, a and b composite.
// Enumerates exactly that region (a in (1e4, 22361], b from a+1 while
// g <= 5e8) and certifies every pair by witness search.
RangeReport verify_residual_i(const ResidualRunOptions& options = {},
                              const ProgressFn& progress = {});

// Region (iii): 4 <= a <= a_cap (<= 1e4), b < min(b_cap+1, 1e6), a and b
// composite. Caps allow desk-scale slices of the full region.
RangeReport verify_residual_iii(u64 a_cap, u64 b_cap,
                                const ResidualRunOptions& options = {},
                                const ProgressFn& progress = {});

// pi_{a,b} / pi(g): the ratio the density conjecture drives to 1/2 as
// a grows. Throws DegenerateG for g < 2, RangeTooLarge beyond the sieve
// ceiling.
double conjecture2_ratio(const GeneratorPair& pair, unsigned threads = 1);

// JSON mirroring the report fields (wall_time_sec omitted: serialized
// output is byte-stable across identical runs).
std::string range_report_to_json(const RangeReport& report);

}  // namespace frobcert
