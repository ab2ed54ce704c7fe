// frobcert: certificates that some prime p <= g = ab-a-b is representable
// as a*x + b*y for coprime generators 2 <= a < b.
//
// Subcommands: certify, count, bounds, verify. Progress goes to stderr,
// data to stdout; json/csv output is byte-stable for identical inputs.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "frobcert/analytic.hpp"
#include "frobcert/casework.hpp"
#include "frobcert/semigroup.hpp"
#include "frobcert/sieve.hpp"
#include "frobcert/verifier.hpp"

namespace {

using frobcert::u64;

enum ExitCode {
  kOk = 0,
  kInvalidInput = 2,
  kNoCertificate = 3,
  kRangeTooLarge = 4,
  kVerifyFailed = 5,
  kCheckpointCorrupt = 6,
};

std::string real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_real(double v) { return std::isfinite(v) ? real17(v) : "null"; }

// Accepts plain integers and scientific notation (5e8).
u64 parse_u64_arg(const std::string& s, const char* what) {
  if (s.empty()) throw frobcert::OutOfDomain(std::string(what) + ": empty value");
  if (s.find_first_not_of("0123456789") == std::string::npos) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || *end != '\0')
      throw frobcert::OutOfDomain(std::string(what) + ": cannot parse '" + s + "'");
    return v;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v) || v < 0 ||
      v >= 9.2e18 || v != std::floor(v))
    throw frobcert::OutOfDomain(std::string(what) + ": cannot parse '" + s +
                                "' as a nonnegative integer");
  return static_cast<u64>(v);
}

double parse_real_arg(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw frobcert::OutOfDomain(std::string(what) + ": cannot parse '" + s + "'");
  return v;
}

struct Format {
  enum Kind { kHuman, kJson, kCsv } kind = kHuman;
};

void add_format_option(CLI::App* cmd, Format* fmt) {
  cmd->add_option_function<std::string>(
         "--format",
         [fmt](const std::string& s) {
           if (s == "human") fmt->kind = Format::kHuman;
           else if (s == "json") fmt->kind = Format::kJson;
           else if (s == "csv") fmt->kind = Format::kCsv;
           else throw CLI::ValidationError("--format must be human, json or csv");
         },
         "output format: human (default), json, csv")
      ->expected(1);
}

// ---------------------------------------------------------------- certify

int run_certify(const std::string& a_str, const std::string& b_str, Format fmt) {
  const u64 a = parse_u64_arg(a_str, "a");
  const u64 b = parse_u64_arg(b_str, "b");
  const frobcert::GeneratorPair pair = frobcert::make_pair(a, b);
  const frobcert::Certificate cert = frobcert::certify(pair);
  if (!frobcert::verify_certificate(cert)) {
    std::fprintf(stderr, "internal error: issued certificate failed self-verification\n");
    return 1;
  }
  switch (fmt.kind) {
    case Format::kJson:
      std::printf("%s\n", frobcert::certificate_to_json(cert).c_str());
      break;
    case Format::kCsv:
      std::printf("a,b,g,label,kind,p,x,y,margin,slack\n");
      if (cert.is_witness()) {
        const auto& w = cert.witness();
        std::printf("%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%s,witness,%" PRIu64
                    ",%" PRIu64 ",%" PRIu64 ",,\n",
                    pair.a, pair.b, pair.g, to_string(cert.label), w.p, w.rep.x,
                    w.rep.y);
      } else {
        const auto& m = cert.margin();
        std::printf("%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%s,analytic,,,,%s,%s\n",
                    pair.a, pair.b, pair.g, to_string(cert.label),
                    real17(m.margin).c_str(), real17(m.safety_slack).c_str());
      }
      break;
    case Format::kHuman:
      std::printf("pair: a=%" PRIu64 " b=%" PRIu64 " g=%" PRIu64 "\n", pair.a,
                  pair.b, pair.g);
      std::printf("label: %s\n", to_string(cert.label));
      if (cert.is_witness()) {
        const auto& w = cert.witness();
        std::printf("kind: witness\nprime: %" PRIu64 " = %" PRIu64 "*%" PRIu64
                    " + %" PRIu64 "*%" PRIu64 "\n",
                    w.p, pair.a, w.rep.x, pair.b, w.rep.y);
      } else {
        const auto& m = cert.margin();
        std::printf("kind: analytic\nmain: %s\n", real17(m.main_term).c_str());
        for (const auto& t : m.deductions)
          std::printf("  - %s: %s\n", t.name.c_str(), real17(t.value).c_str());
        std::printf("margin: %s (slack %s)\n", real17(m.margin).c_str(),
                    real17(m.safety_slack).c_str());
      }
      break;
  }
  return kOk;
}

// ------------------------------------------------------------------ count

int run_count(const std::string& a_str, const std::string& b_str, Format fmt,
              unsigned threads) {
  const u64 a = parse_u64_arg(a_str, "a");
  const u64 b = parse_u64_arg(b_str, "b");
  const frobcert::GeneratorPair pair = frobcert::make_pair(a, b);
  u64 count_ab = 0, count_g = 0;
  bool ratio_defined = false;
  double ratio = 0;
  if (pair.g >= 2) {
    count_ab = frobcert::pi_ab(pair, threads);
    count_g = frobcert::prime_count(pair.g, threads);
    ratio_defined = count_g > 0;
    if (ratio_defined) ratio = static_cast<double>(count_ab) / count_g;
  }
  switch (fmt.kind) {
    case Format::kJson:
      std::printf("{\"a\":%" PRIu64 ",\"b\":%" PRIu64 ",\"g\":%" PRIu64
                  ",\"pi_ab\":%" PRIu64 ",\"pi_g\":%" PRIu64
                  ",\"ratio\":%s,\"schema_version\":1}\n",
                  pair.a, pair.b, pair.g, count_ab, count_g,
                  ratio_defined ? real17(ratio).c_str() : "null");
      break;
    case Format::kCsv:
      std::printf("a,b,g,pi_ab,pi_g,ratio\n%" PRIu64 ",%" PRIu64 ",%" PRIu64
                  ",%" PRIu64 ",%" PRIu64 ",%s\n",
                  pair.a, pair.b, pair.g, count_ab, count_g,
                  ratio_defined ? real17(ratio).c_str() : "n/a");
      break;
    case Format::kHuman:
      std::printf("pi_ab(%" PRIu64 ",%" PRIu64 ") = %" PRIu64 "\n", pair.a, pair.b,
                  count_ab);
      std::printf("pi(g=%" PRIu64 ") = %" PRIu64 "\n", pair.g, count_g);
      std::printf("ratio = %s\n", ratio_defined ? real17(ratio).c_str() : "n/a");
      break;
  }
  return kOk;
}

// ----------------------------------------------------------------- bounds

struct BoundsArgs {
  std::string expr;
  std::vector<std::string> values;
  std::string at;
  std::string from, to;
  u64 points = 0;
  double K = 155.0;
  u64 q = 0;
};

std::vector<double> bounds_grid(const BoundsArgs& args) {
  std::vector<double> xs;
  for (const auto& v : args.values) xs.push_back(parse_real_arg(v, "value"));
  if (!args.at.empty()) xs.push_back(parse_real_arg(args.at, "--at"));
  if (!args.from.empty() || !args.to.empty()) {
    if (args.from.empty() || args.to.empty() || args.points < 2)
      throw frobcert::OutOfDomain("sweep needs --from, --to and --points >= 2");
    const double lo = parse_real_arg(args.from, "--from");
    const double hi = parse_real_arg(args.to, "--to");
    if (!(lo > 0) || !(hi > lo))
      throw frobcert::OutOfDomain("sweep needs 0 < from < to");
    const double llo = std::log(lo), lhi = std::log(hi);
    for (u64 i = 0; i < args.points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(args.points - 1);
      xs.push_back(i + 1 == args.points ? hi : std::exp(llo + t * (lhi - llo)));
    }
  }
  if (xs.empty()) throw frobcert::OutOfDomain("bounds: no evaluation points given");
  return xs;
}

int run_bounds(const BoundsArgs& args, Format fmt) {
  struct Row {
    std::vector<std::pair<std::string, std::string>> cols;  // name, rendered value
  };
  std::vector<Row> rows;
  const std::vector<double> xs = bounds_grid(args);

  if (args.expr == "li") {
    for (double x : xs)
      rows.push_back({{{"x", real17(x)}, {"li", real17(frobcert::log_integral(x))}}});
  } else if (args.expr == "panaitopol") {
    for (double x : xs) {
      const auto [lo, hi] = frobcert::panaitopol_bounds(x);
      rows.push_back({{{"x", real17(x)}, {"lower", real17(lo)}, {"upper", real17(hi)}}});
    }
  } else if (args.expr == "bennett") {
    for (double x : xs) {
      if (x < 0 || x != std::floor(x))
        throw frobcert::OutOfDomain("bennett: q must be a nonnegative integer");
      const auto bc = frobcert::bennett_constants(static_cast<u64>(x));
      rows.push_back({{{"q", real17(x)},
                       {"c0", real17(bc.c0)},
                       {"x0", fmt.kind == Format::kJson ? json_real(bc.x0) : real17(bc.x0)},
                       {"log_x0", real17(bc.log_x0)}}});
    }
  } else if (args.expr == "aperr") {
    if (args.q == 0) throw frobcert::OutOfDomain("aperr: requires --q");
    for (double x : xs) {
      const auto eb = frobcert::ap_error_bound(x, args.q);
      rows.push_back({{{"x", real17(x)},
                       {"q", std::to_string(args.q)},
                       {"bound", real17(eb.bound)},
                       {"source", std::string("\"") + to_string(eb.source) + "\""}}});
    }
  } else if (args.expr == "f") {
    for (double g : xs) {
      const auto report =
          frobcert::short_interval_margin(g, std::log(std::sqrt(g)), args.K);
      rows.push_back({{{"g", real17(g)}, {"f", real17(report.margin)}}});
    }
  } else if (args.expr == "ftail") {
    for (double g : xs)
      rows.push_back(
          {{{"g", real17(g)}, {"tail", real17(frobcert::short_interval_margin_tail(g, args.K))}}});
  } else {
    std::fprintf(stderr, "bounds: unknown expression '%s' (li, panaitopol, bennett, aperr, f, ftail)\n",
                 args.expr.c_str());
    return kInvalidInput;
  }

  // minimum of the last numeric column, reported for sweeps
  size_t min_idx = 0;
  double min_val = 0;
  const bool track_min = (args.expr == "f" || args.expr == "ftail") && rows.size() > 1;
  if (track_min) {
    for (size_t i = 0; i < rows.size(); ++i) {
      const double v = std::strtod(rows[i].cols.back().second.c_str(), nullptr);
      if (i == 0 || v < min_val) {
        min_val = v;
        min_idx = i;
      }
    }
  }

  switch (fmt.kind) {
    case Format::kCsv: {
      for (size_t c = 0; c < rows[0].cols.size(); ++c)
        std::printf("%s%s", c ? "," : "", rows[0].cols[c].first.c_str());
      std::printf("\n");
      for (const Row& r : rows) {
        for (size_t c = 0; c < r.cols.size(); ++c) {
          std::string v = r.cols[c].second;
          if (!v.empty() && v.front() == '"') v = v.substr(1, v.size() - 2);
          std::printf("%s%s", c ? "," : "", v.c_str());
        }
        std::printf("\n");
      }
      break;
    }
    case Format::kJson: {
      std::string out = "{\"expr\":\"" + args.expr + "\",\"rows\":[";
      for (size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ',';
        out += '{';
        for (size_t c = 0; c < rows[i].cols.size(); ++c) {
          if (c) out += ',';
          out += "\"" + rows[i].cols[c].first + "\":" + rows[i].cols[c].second;
        }
        out += '}';
      }
      out += ']';
      if (track_min) {
        out += ",\"min\":{";
        for (size_t c = 0; c < rows[min_idx].cols.size(); ++c) {
          if (c) out += ',';
          out += "\"" + rows[min_idx].cols[c].first + "\":" + rows[min_idx].cols[c].second;
        }
        out += ",\"index\":" + std::to_string(min_idx) + "}";
      }
      out += ",\"schema_version\":1}";
      std::printf("%s\n", out.c_str());
      break;
    }
    case Format::kHuman: {
      for (const Row& r : rows) {
        for (size_t c = 0; c < r.cols.size(); ++c)
          std::printf("%s%s=%s", c ? "  " : "", r.cols[c].first.c_str(),
                      r.cols[c].second.c_str());
        std::printf("\n");
      }
      if (track_min)
        std::printf("minimum %s at %s=%s (index %zu of %zu)\n",
                    rows[min_idx].cols.back().second.c_str(),
                    rows[min_idx].cols.front().first.c_str(),
                    rows[min_idx].cols.front().second.c_str(), min_idx, rows.size());
      break;
    }
  }
  return kOk;
}

// ----------------------------------------------------------------- verify

struct VerifyArgs {
  std::string region;
  std::vector<std::string> rect;
  std::string a_cap = "10000";
  std::string b_cap = "1000000";
  std::string filter;
  unsigned shards = 0;
  std::string checkpoint;
  bool resume = false;
};

int run_verify(const VerifyArgs& args, Format fmt) {
  frobcert::ProgressFn progress = [](unsigned done, unsigned total) {
    std::fprintf(stderr, "progress: shard %u/%u done\n", done, total);
  };

  frobcert::RangeReport report;
  if (args.region == "i") {
    frobcert::ResidualRunOptions opt;
    opt.shard_count = args.shards;
    opt.checkpoint_path = args.checkpoint;
    opt.resume = args.resume;
    report = frobcert::verify_residual_i(opt, progress);
  } else if (args.region == "iii") {
    frobcert::ResidualRunOptions opt;
    opt.shard_count = args.shards;
    opt.checkpoint_path = args.checkpoint;
    opt.resume = args.resume;
    report = frobcert::verify_residual_iii(parse_u64_arg(args.a_cap, "--a-cap"),
                                           parse_u64_arg(args.b_cap, "--b-cap"), opt,
                                           progress);
  } else if (!args.rect.empty()) {
    if (args.rect.size() != 4)
      throw frobcert::OutOfDomain("--rect needs a_lo a_hi b_lo b_hi");
    frobcert::RangeJob job;
    job.a_lo = parse_u64_arg(args.rect[0], "a_lo");
    job.a_hi = parse_u64_arg(args.rect[1], "a_hi");
    job.b_lo = parse_u64_arg(args.rect[2], "b_lo");
    job.b_hi = parse_u64_arg(args.rect[3], "b_hi");
    if (!args.filter.empty()) {
      const auto label = frobcert::case_label_from_string(args.filter);
      if (!label) throw frobcert::OutOfDomain("--filter: unknown label " + args.filter);
      job.region_filter = *label;
    }
    job.shard_count = args.shards;
    job.checkpoint_path = args.checkpoint;
    job.resume = args.resume;
    report = frobcert::verify_range(job, progress);
  } else {
    throw frobcert::OutOfDomain("verify: give --region i|iii or --rect");
  }

  switch (fmt.kind) {
    case Format::kJson:
      std::printf("%s\n", frobcert::range_report_to_json(report).c_str());
      break;
    case Format::kCsv:
      std::printf(
          "pairs_total,noncoprime,filtered,prime_generator,witnessed,analytic,"
          "failures,max_search_depth,non_y1_witnesses\n");
      std::printf("%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64
                  ",%" PRIu64 ",%zu,%" PRIu64 ",%" PRIu64 "\n",
                  report.pairs_total, report.pairs_skipped_noncoprime,
                  report.pairs_skipped_filtered, report.pairs_prime_generator,
                  report.pairs_witnessed, report.pairs_analytic,
                  report.failures.size(), report.max_search_depth,
                  report.non_y1_witnesses);
      break;
    case Format::kHuman:
      std::printf("pairs total:        %" PRIu64 "\n", report.pairs_total);
      std::printf("noncoprime skipped: %" PRIu64 "\n", report.pairs_skipped_noncoprime);
      std::printf("filtered:           %" PRIu64 "\n", report.pairs_skipped_filtered);
      std::printf("prime generator:    %" PRIu64 "\n", report.pairs_prime_generator);
      std::printf("witnessed:          %" PRIu64 "\n", report.pairs_witnessed);
      std::printf("analytic:           %" PRIu64 "\n", report.pairs_analytic);
      std::printf("failures:           %zu\n", report.failures.size());
      for (const auto& f : report.failures)
        std::printf("  (%" PRIu64 ",%" PRIu64 "): %s\n", f.a, f.b, f.reason.c_str());
      std::printf("max search depth:   %" PRIu64 "\n", report.max_search_depth);
      std::printf("non-y1 witnesses:   %" PRIu64 "\n", report.non_y1_witnesses);
      std::printf("wall time:          %.3f s\n", report.wall_time_sec);
      break;
  }
  return report.all_passed() ? kOk : kVerifyFailed;
}

int dispatch_errors(const std::function<int()>& body) {
  try {
    return body();
  } catch (const frobcert::NoCertificate& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNoCertificate;
  } catch (const frobcert::RangeTooLarge& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRangeTooLarge;
  } catch (const frobcert::CheckpointCorrupt& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCheckpointCorrupt;
  } catch (const frobcert::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalidInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("FPC_SIEVE_SEGMENT")) {
    try {
      frobcert::set_default_segment_odds(parse_u64_arg(env, "FPC_SIEVE_SEGMENT"));
    } catch (const frobcert::Error& e) {
      std::fprintf(stderr, "warning: ignoring FPC_SIEVE_SEGMENT: %s\n", e.what());
    }
  }

  CLI::App app{"certify that a prime p <= ab-a-b is representable as ax+by"};
  app.require_subcommand(1);
  int exit_code = kOk;

  // certify
  {
    auto* cmd = app.add_subcommand("certify", "produce a certificate for one pair");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto fmt = std::make_shared<Format>();
    cmd->add_option("a", *a, "first generator")->required();
    cmd->add_option("b", *b, "second generator")->required();
    add_format_option(cmd, fmt.get());
    cmd->callback([&exit_code, a, b, fmt] {
      exit_code = dispatch_errors([&] { return run_certify(*a, *b, *fmt); });
    });
  }

  // count
  {
    auto* cmd = app.add_subcommand("count", "exact pi_ab, pi(g) and their ratio");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto fmt = std::make_shared<Format>();
    auto threads = std::make_shared<unsigned>(std::thread::hardware_concurrency());
    cmd->add_option("a", *a, "first generator")->required();
    cmd->add_option("b", *b, "second generator")->required();
    cmd->add_option("--threads", *threads, "sieve worker threads");
    add_format_option(cmd, fmt.get());
    cmd->callback([&exit_code, a, b, fmt, threads] {
      exit_code = dispatch_errors([&] { return run_count(*a, *b, *fmt, *threads); });
    });
  }

  // bounds
  {
    auto* cmd = app.add_subcommand("bounds", "evaluate the bound functions on a grid");
    auto args = std::make_shared<BoundsArgs>();
    auto fmt = std::make_shared<Format>();
    cmd->add_option("expr", args->expr, "li | panaitopol | bennett | aperr | f | ftail")
        ->required();
    cmd->add_option("values", args->values, "evaluation points");
    cmd->add_option("--at", args->at, "single evaluation point");
    cmd->add_option("--from", args->from, "sweep start");
    cmd->add_option("--to", args->to, "sweep end");
    cmd->add_option("--points", args->points, "sweep point count (log spaced)");
    cmd->add_option("--K", args->K, "short-interval case constant (155, 4.2, 210)");
    cmd->add_option("--q", args->q, "modulus for aperr");
    add_format_option(cmd, fmt.get());
    cmd->callback([&exit_code, args, fmt] {
      exit_code = dispatch_errors([&] { return run_bounds(*args, *fmt); });
    });
  }

  // verify
  {
    auto* cmd = app.add_subcommand("verify", "certify every pair in a region or rectangle");
    auto args = std::make_shared<VerifyArgs>();
    auto fmt = std::make_shared<Format>();
    cmd->add_option("--region", args->region, "i or iii");
    cmd->add_option("--rect", args->rect, "a_lo a_hi b_lo b_hi")->expected(4);
    cmd->add_option("--a-cap", args->a_cap, "region iii: largest a (<= 1e4)");
    cmd->add_option("--b-cap", args->b_cap, "region iii: largest b (<= 1e6)");
    cmd->add_option("--filter", args->filter, "only certify pairs with this label");
    cmd->add_option("--shards", args->shards, "shard count (0 = auto)");
    cmd->add_option("--checkpoint", args->checkpoint, "checkpoint file path");
    cmd->add_flag("--resume", args->resume, "resume from the checkpoint");
    add_format_option(cmd, fmt.get());
    cmd->callback([&exit_code, args, fmt] {
      exit_code = dispatch_errors([&] { return run_verify(*args, *fmt); });
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalidInput;
  }
  return exit_code;
}
