#include "frobcert/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "frobcert/sieve.hpp"

namespace frobcert {

namespace {

constexpr u64 kRegionIGCap = 500'000'000ULL;
constexpr u64 kPrimeBitmapCap = u64{1} << 24;

struct ShardCounters {
  u64 total = 0;
  u64 noncoprime = 0;
  u64 filtered = 0;
  u64 prime_gen = 0;
  u64 witnessed = 0;
  u64 analytic = 0;
  u64 max_depth = 0;
  u64 non_y1 = 0;
  std::vector<RangeFailure> failures;
};

struct ShardData {
  ShardCounters c;
  std::vector<std::string> lines;  // checkpoint audit lines
};

struct Strip {
  u64 a_begin = 0;
  u64 a_end = 0;  // inclusive
};

// Odd-only composite bitmap for fast b-primality in tight rectangles.
class PrimeBitmap {
 public:
  explicit PrimeBitmap(u64 limit) : limit_(limit), bits_((limit >> 1) + 1, false) {
    for (u64 i = 3; i * i <= limit; i += 2) {
      if (bits_[i >> 1]) continue;
      for (u64 j = i * i; j <= limit; j += 2 * i) bits_[j >> 1] = true;
    }
  }
  bool test(u64 n) const {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    return !bits_[n >> 1];
  }

 private:
  u64 limit_;
  std::vector<bool> bits_;
};

std::vector<Strip> make_strips(u64 a_lo, u64 a_hi, unsigned shards) {
  const u64 n = a_hi - a_lo + 1;
  std::vector<Strip> strips;
  strips.reserve(shards);
  const u64 base = n / shards, rem = n % shards;
  u64 cursor = a_lo;
  for (unsigned i = 0; i < shards; ++i) {
    const u64 width = base + (i < rem ? 1 : 0);
    strips.push_back({cursor, cursor + width - 1});
    cursor += width;
  }
  return strips;
}

u64 row_b_end(const RangeJob& job, u64 a) {
  u64 b_end = job.b_hi;
  if (job.g_cap) b_end = std::min(b_end, (*job.g_cap + a) / (a - 1));
  return b_end;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) out += (ch == ',' || ch == '\n') ? ';' : ch;
  return out;
}

ShardData run_shard(const RangeJob& job, const Strip& strip, bool record_lines,
                    const PrimeBitmap* bmap) {
  ShardData out;
  char line[192];
  for (u64 a = strip.a_begin; a <= strip.a_end; ++a) {
    const u64 b_start = std::max(a + 1, job.b_lo);
    const u64 b_end = row_b_end(job, a);
    if (b_end < b_start) continue;
    out.c.total += b_end - b_start + 1;

    const bool a_prime = is_prime(a);
    if (a_prime && a > 2 && job.region_filter &&
        *job.region_filter != CaseLabel::PrimeGenerator) {
      // whole row classifies PrimeGenerator (or noncoprime): count in O(1)
      const u64 mult = b_end / a - (b_start - 1) / a;
      out.c.noncoprime += mult;
      out.c.filtered += (b_end - b_start + 1) - mult;
      continue;
    }
    const u64 phi = euler_phi(a);

    for (u64 b = b_start; b <= b_end; ++b) {
      if (std::gcd(a, b) != 1) {
        ++out.c.noncoprime;
        continue;
      }
      const u64 g = a * b - a - b;
      const bool b_prime = bmap ? bmap->test(b) : is_prime(b);
      const CaseLabel label = detail::classify_raw(a, b, g, a_prime, b_prime);
      if (job.region_filter && label != *job.region_filter) {
        ++out.c.filtered;
        continue;
      }

      GeneratorPair pair;
      pair.a = a;
      pair.b = b;
      pair.g = g;
      pair.phi_a = phi;
      pair.b_inv_mod_a = mod_inverse(b, a);
      pair.a_is_prime = a_prime;
      pair.b_is_prime = b_prime;

      try {
        const Certificate cert = certify(pair);
        if (cert.is_analytic()) {
          ++out.c.analytic;
          if (record_lines) {
            std::snprintf(line, sizeof(line), "%llu,%llu,%s,analytic,-,-,-",
                          static_cast<unsigned long long>(a),
                          static_cast<unsigned long long>(b), to_string(cert.label));
            out.lines.emplace_back(line);
          }
        } else {
          const WitnessCertificate& w = cert.witness();
          if (cert.label == CaseLabel::PrimeGenerator) {
            ++out.c.prime_gen;
          } else {
            ++out.c.witnessed;
            if (w.rep.y == 1)
              out.c.max_depth = std::max(out.c.max_depth, w.rep.x);
            else
              ++out.c.non_y1;
          }
          if (record_lines) {
            std::snprintf(line, sizeof(line), "%llu,%llu,%s,%s,%llu,%llu,%llu",
                          static_cast<unsigned long long>(a),
                          static_cast<unsigned long long>(b), to_string(cert.label),
                          cert.label == CaseLabel::PrimeGenerator ? "prime_generator"
                                                                  : "witness",
                          static_cast<unsigned long long>(w.p),
                          static_cast<unsigned long long>(w.rep.x),
                          static_cast<unsigned long long>(w.rep.y));
            out.lines.emplace_back(line);
          }
        }
      } catch (const NoCertificate& e) {
        out.c.failures.push_back({a, b, e.what()});
        if (record_lines) {
          std::snprintf(line, sizeof(line), "%llu,%llu,%s,failure,%s,-,-",
                        static_cast<unsigned long long>(a),
                        static_cast<unsigned long long>(b), to_string(label),
                        sanitize(e.what()).c_str());
          out.lines.emplace_back(line);
        }
      }
    }
  }
  return out;
}

std::string job_header(const RangeJob& job, unsigned shards) {
  std::ostringstream os;
  os << "#job," << job.a_lo << ',' << job.a_hi << ',' << job.b_lo << ','
     << job.b_hi << ',';
  if (job.g_cap)
    os << *job.g_cap;
  else
    os << '-';
  os << ',';
  if (job.region_filter)
    os << to_string(*job.region_filter);
  else
    os << '-';
  os << ',' << shards;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

u64 parse_u64_field(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw CheckpointCorrupt("checkpoint: malformed numeric field '" + s + "'");
  return std::stoull(s);
}

// Blocks of pair lines each terminated by a "#shard,<idx>,done,..." marker;
// a shard is complete iff its marker was flushed. Lines after the last
// marker belong to an interrupted shard and are discarded.
std::vector<std::optional<ShardCounters>> load_checkpoint(const RangeJob& job,
                                                          unsigned shards) {
  std::ifstream in(job.checkpoint_path);
  if (!in) throw CheckpointCorrupt("checkpoint: cannot open " + job.checkpoint_path);
  std::string line;
  if (!std::getline(in, line) || line != "#frobcert-checkpoint v1")
    throw CheckpointCorrupt("checkpoint: bad magic line");
  if (!std::getline(in, line) || line != job_header(job, shards))
    throw CheckpointCorrupt("checkpoint: job line does not match the resumed job");

  std::vector<std::optional<ShardCounters>> done(shards);
  std::vector<RangeFailure> pending;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("#shard,", 0) == 0) {
      const auto f = split_csv(line);
      if (f.size() != 12 || f[2] != "done")
        throw CheckpointCorrupt("checkpoint: malformed shard marker");
      const u64 idx = parse_u64_field(f[1]);
      if (idx >= shards) throw CheckpointCorrupt("checkpoint: shard index out of range");
      if (done[idx]) throw CheckpointCorrupt("checkpoint: duplicate shard marker");
      ShardCounters c;
      c.total = parse_u64_field(f[3]);
      c.noncoprime = parse_u64_field(f[4]);
      c.filtered = parse_u64_field(f[5]);
      c.prime_gen = parse_u64_field(f[6]);
      c.witnessed = parse_u64_field(f[7]);
      c.analytic = parse_u64_field(f[8]);
      const u64 nfail = parse_u64_field(f[9]);
      c.max_depth = parse_u64_field(f[10]);
      c.non_y1 = parse_u64_field(f[11]);
      if (nfail != pending.size())
        throw CheckpointCorrupt("checkpoint: failure lines disagree with marker");
      c.failures = std::move(pending);
      pending = {};
      done[idx] = std::move(c);
    } else {
      const auto f = split_csv(line);
      if (f.size() != 7) throw CheckpointCorrupt("checkpoint: malformed pair line");
      if (f[3] == "failure")
        pending.push_back({parse_u64_field(f[0]), parse_u64_field(f[1]), f[4]});
    }
  }
  return done;
}

std::string shard_marker(unsigned idx, const ShardCounters& c) {
  std::ostringstream os;
  os << "#shard," << idx << ",done," << c.total << ',' << c.noncoprime << ','
     << c.filtered << ',' << c.prime_gen << ',' << c.witnessed << ',' << c.analytic
     << ',' << c.failures.size() << ',' << c.max_depth << ',' << c.non_y1;
  return os.str();
}

void validate_job(const RangeJob& job) {
  if (job.a_lo < 2) throw OutOfDomain("verify_range: a_lo must be >= 2");
  if (job.g_cap && *job.g_cap >= (u64{1} << 59))
    throw OutOfDomain("verify_range: g_cap too large");
  if (!job.g_cap && job.a_hi >= job.a_lo &&
      u128{job.a_hi} * job.b_hi >= (u128{1} << 62))
    throw OutOfDomain("verify_range: rectangle exceeds the arithmetic ceiling");
}

}  // namespace

bool RangeReport::counters_consistent() const {
  return pairs_total == pairs_skipped_noncoprime + pairs_skipped_filtered +
                            pairs_prime_generator + pairs_witnessed +
                            pairs_analytic + failures.size();
}

RangeReport verify_range(const RangeJob& job, const ProgressFn& progress) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_job(job);
  RangeReport report;
  if (job.a_hi < job.a_lo || job.b_hi < job.b_lo) return report;

  const u64 a_range = job.a_hi - job.a_lo + 1;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned shards = job.shard_count
                        ? job.shard_count
                        : static_cast<unsigned>(std::min<u64>(a_range, 8 * hw));
  shards = static_cast<unsigned>(std::min<u64>(shards, a_range));
  shards = std::max(shards, 1u);

  const std::vector<Strip> strips = make_strips(job.a_lo, job.a_hi, shards);
  std::vector<std::optional<ShardCounters>> results(shards);

  const bool checkpointing = !job.checkpoint_path.empty();
  std::ofstream ck;
  if (checkpointing) {
    if (job.resume) {
      auto done = load_checkpoint(job, shards);
      for (unsigned i = 0; i < shards; ++i) results[i] = std::move(done[i]);
      ck.open(job.checkpoint_path, std::ios::app);
    } else {
      ck.open(job.checkpoint_path, std::ios::trunc);
      if (ck) ck << "#frobcert-checkpoint v1\n" << job_header(job, shards) << "\n" << std::flush;
    }
    if (!ck) throw CheckpointCorrupt("checkpoint: cannot open for writing");
  }

  std::unique_ptr<PrimeBitmap> bmap;
  if (job.b_hi <= kPrimeBitmapCap) bmap = std::make_unique<PrimeBitmap>(job.b_hi);

  std::vector<unsigned> todo;
  for (unsigned i = 0; i < shards; ++i)
    if (!results[i]) todo.push_back(i);

  std::mutex io_mutex;
  std::atomic<size_t> next{0};
  std::atomic<unsigned> completed{static_cast<unsigned>(shards - todo.size())};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const size_t k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= todo.size()) break;
      const unsigned idx = todo[k];
      try {
        ShardData data = run_shard(job, strips[idx], checkpointing, bmap.get());
        std::lock_guard<std::mutex> lock(io_mutex);
        if (checkpointing) {
          for (const std::string& l : data.lines) ck << l << '\n';
          ck << shard_marker(idx, data.c) << '\n' << std::flush;
        }
        results[idx] = std::move(data.c);
        const unsigned done_now = completed.fetch_add(1) + 1;
        if (progress) progress(done_now, shards);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(hw, static_cast<unsigned>(todo.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (unsigned i = 0; i < shards; ++i) {
    const ShardCounters& c = *results[i];
    report.pairs_total += c.total;
    report.pairs_skipped_noncoprime += c.noncoprime;
    report.pairs_skipped_filtered += c.filtered;
    report.pairs_prime_generator += c.prime_gen;
    report.pairs_witnessed += c.witnessed;
    report.pairs_analytic += c.analytic;
    report.max_search_depth = std::max(report.max_search_depth, c.max_depth);
    report.non_y1_witnesses += c.non_y1;
    for (const RangeFailure& f : c.failures) report.failures.push_back(f);
  }
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

RangeReport verify_residual_i(const ResidualRunOptions& options,
                              const ProgressFn& progress) {
  RangeJob job;
  job.a_lo = 10'001;
  // largest a with g(a, a+1) = a^2 - a - 1 <= 5e8
  u64 a_hi = static_cast<u64>((1.0 + std::sqrt(1.0 + 4.0 * 5e8)) / 2.0);
  while (a_hi * a_hi - a_hi - 1 > kRegionIGCap) --a_hi;
  while ((a_hi + 1) * (a_hi + 1) - (a_hi + 1) - 1 <= kRegionIGCap) ++a_hi;
  job.a_hi = options.a_hi_override ? std::min(options.a_hi_override, a_hi) : a_hi;
  job.b_lo = job.a_lo + 1;
  job.b_hi = (kRegionIGCap + job.a_lo) / (job.a_lo - 1);
  job.g_cap = kRegionIGCap;
  job.region_filter = CaseLabel::ResidualI;
  job.shard_count = options.shard_count;
  job.checkpoint_path = options.checkpoint_path;
  job.resume = options.resume;
  return verify_range(job, progress);
}

RangeReport verify_residual_iii(u64 a_cap, u64 b_cap,
                                const ResidualRunOptions& options,
                                const ProgressFn& progress) {
  if (a_cap > 10'000) throw OutOfRange("verify_residual_iii: a_cap must be <= 1e4");
  if (b_cap > 1'000'000) throw OutOfRange("verify_residual_iii: b_cap must be <= 1e6");
  RangeJob job;
  job.a_lo = 4;
  job.a_hi = a_cap;
  job.b_lo = 6;
  job.b_hi = std::min(b_cap, u64{999'999});
  job.region_filter = CaseLabel::ResidualIII;
  job.shard_count = options.shard_count;
  job.checkpoint_path = options.checkpoint_path;
  job.resume = options.resume;
  if (job.a_hi < job.a_lo) return RangeReport{};
  return verify_range(job, progress);
}

double conjecture2_ratio(const GeneratorPair& pair, unsigned threads) {
  if (pair.g < 2) throw DegenerateG("conjecture2_ratio: g < 2 leaves no primes");
  const u64 pi_g = prime_count(pair.g, threads);
  return static_cast<double>(pi_ab(pair, threads)) / static_cast<double>(pi_g);
}

std::string range_report_to_json(const RangeReport& report) {
  std::ostringstream os;
  os << "{\"pairs_total\":" << report.pairs_total
     << ",\"pairs_skipped_noncoprime\":" << report.pairs_skipped_noncoprime
     << ",\"pairs_skipped_filtered\":" << report.pairs_skipped_filtered
     << ",\"pairs_prime_generator\":" << report.pairs_prime_generator
     << ",\"pairs_witnessed\":" << report.pairs_witnessed
     << ",\"pairs_analytic\":" << report.pairs_analytic << ",\"failures\":[";
  for (size_t i = 0; i < report.failures.size(); ++i) {
    if (i) os << ',';
    os << "{\"a\":" << report.failures[i].a << ",\"b\":" << report.failures[i].b
       << ",\"reason\":\"";
    for (char ch : report.failures[i].reason)
      if (ch == '"' || ch == '\\')
        os << '\\' << ch;
      else if (ch == '\n')
        os << "\\n";
      else
        os << ch;
    os << "\"}";
  }
  os << "],\"max_search_depth\":" << report.max_search_depth
     << ",\"non_y1_witnesses\":" << report.non_y1_witnesses
     << ",\"schema_version\":1}";
  return os.str();
}

}  // namespace frobcert
