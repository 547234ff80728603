// alsv: density series over smallest/largest prime factors.
//
// Subcommands: sum (weighted series + convergence report), duality (both
// sides of the P(n)/p(n) duality), verify (identity suites), sieve (SPF
// cache construction), eval (single function values).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "alsv/arith.hpp"
#include "alsv/oracles.hpp"
#include "alsv/report.hpp"
#include "alsv/sum_engine.hpp"
#include "alsv/verify.hpp"

namespace fs = std::filesystem;
using namespace alsv;

namespace {

uint64_t parse_xvalue(const std::string& s) {
  try {
    size_t pos = 0;
    const long double v = std::stold(s, &pos);
    if (pos != s.size() || !(v >= 1.0L) || v > 9.2e18L)
      throw std::invalid_argument("");
    return static_cast<uint64_t>(v);  // scientific notation is floored
  } catch (...) {
    throw std::invalid_argument("bad x value: '" + s + "'");
  }
}

SumMode parse_mode(const std::string& s) {
  if (s == "float") return SumMode::Float;
  if (s == "exact") return SumMode::Exact;
  throw std::invalid_argument("bad mode: '" + s + "' (expected float or exact)");
}

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("bad format: '" + s + "' (expected csv or json)");
}

std::vector<uint64_t> resolve_checkpoints(const std::string& spec, const std::string& xmax_str) {
  std::optional<uint64_t> xmax;
  if (!xmax_str.empty()) xmax = parse_xvalue(xmax_str);
  if (spec == "pow10") {
    if (!xmax) throw std::invalid_argument("--xmax is required with the pow10 checkpoint ladder");
    return pow10_checkpoints(*xmax);
  }
  std::vector<uint64_t> cps;
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    cps.push_back(parse_xvalue(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  for (size_t i = 1; i < cps.size(); ++i)
    if (cps[i] <= cps[i - 1])
      throw std::invalid_argument("checkpoints must be ascending: '" + spec + "'");
  if (xmax) {
    if (*xmax < cps.back())
      throw std::invalid_argument("--xmax is below the last checkpoint");
    if (*xmax > cps.back()) cps.push_back(*xmax);
  }
  return cps;
}

// Sets an empirical fallback target (measured at the largest checkpoint)
// when the set carries no analytic density.
void ensure_target(CheckpointSeries& series, const EngineOptions& opts) {
  if (series.target) return;
  const auto dc = empirical_density(series.set, std::max<uint64_t>(series.checkpoints.back(), 2),
                                    opts.segment_size);
  if (dc.primes > 0) series.target = Rational::ratio(dc.in_set, dc.primes);
}

int default_window(size_t n_checkpoints) { return static_cast<int>(std::min<size_t>(3, n_checkpoints - 1)); }

struct CommonFlags {
  std::string checkpoints = "pow10";
  std::string xmax;
  std::string mode = "float";
  unsigned threads = 0;
  uint64_t segment_size = kDefaultSegmentSize;
  std::string out = "-";
  std::string format = "csv";
  std::string plot_out;

  void attach(CLI::App* cmd, bool with_report) {
    cmd->add_option("--xmax", xmax, "largest x (integer or scientific, floored)");
    cmd->add_option("--checkpoints", checkpoints, "comma list of x values, or pow10");
    cmd->add_option("--mode", mode, "float | exact");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    cmd->add_option("--segment-size", segment_size, "sieve segment length");
    if (with_report) {
      cmd->add_option("--out", out, "output path ('-' = stdout)");
      cmd->add_option("--format", format, "csv | json");
      cmd->add_option("--plot-out", plot_out, "also write a log10_x,abs_error CSV here");
    }
  }
  EngineOptions engine() const { return EngineOptions{threads, segment_size}; }
};

int cmd_sum(const std::string& weight_desc, const std::string& set_desc, const CommonFlags& flags) {
  // Fail fast: every descriptor and precondition is validated before any
  // sieve work starts.
  const WeightSpec weight = WeightSpec::parse(weight_desc);
  const PrimeSet set = PrimeSet::parse(set_desc);
  const auto cps = resolve_checkpoints(flags.checkpoints, flags.xmax);
  const SumMode mode = parse_mode(flags.mode);
  const ReportFormat format = parse_format(flags.format);
  if (mode == SumMode::Exact && cps.back() > kExactCapacity)
    throw std::invalid_argument("exact mode is capped at x <= 1e6");
  const EngineOptions opts = flags.engine();

  auto series = alladi_series(weight, set, cps, mode, opts);
  ensure_target(series, opts);
  const auto report = analyze(series, default_window(cps.size()));
  emit(report, format, flags.out);
  if (!flags.plot_out.empty()) {
    std::ofstream plot(flags.plot_out);
    if (!plot) throw std::runtime_error("cannot open for writing: " + flags.plot_out);
    emit_plot_csv(report, plot);
  }
  std::cerr << "sum " << weight.descriptor() << " over " << set.descriptor() << ": trend "
            << to_string(report.trend_verdict) << ", final_error "
            << format_double(report.final_error) << ", " << format_double(series.wall_seconds)
            << " s\n";
  return report.trend_verdict == TrendVerdict::Fail ? 2 : 0;
}

int cmd_duality(const std::string& set_desc, const std::string& weight_desc,
                const CommonFlags& flags) {
  const WeightSpec weight = WeightSpec::parse(weight_desc);
  if (!weight.denominator_is_n())
    throw std::invalid_argument("duality requires an over-n weight (mu/n, ramanujan/n:m=M, lambda/n)");
  const PrimeSet set = PrimeSet::parse(set_desc);
  const auto cps = resolve_checkpoints(flags.checkpoints, flags.xmax);
  const SumMode mode = parse_mode(flags.mode);
  const ReportFormat format = parse_format(flags.format);
  if (mode == SumMode::Exact && cps.back() > kExactCapacity)
    throw std::invalid_argument("exact mode is capped at x <= 1e6");
  const EngineOptions opts = flags.engine();

  auto pair = duality_pair(set, weight, cps, mode, opts);
  ensure_target(pair.weighted, opts);
  ensure_target(pair.counts, opts);
  const int window = default_window(cps.size());
  const auto weighted_report = analyze(pair.weighted, window);
  const auto counts_report = analyze(pair.counts, window);

  auto write = [&](std::ostream& os) {
    if (format == ReportFormat::Csv)
      emit_duality_csv(weighted_report, counts_report, os);
    else
      emit_duality_json(weighted_report, counts_report, os);
  };
  if (flags.out == "-") {
    write(std::cout);
  } else {
    std::ofstream out(flags.out);
    if (!out) throw std::runtime_error("cannot open for writing: " + flags.out);
    write(out);
  }
  std::cerr << "duality over " << set.descriptor() << ": weighted "
            << to_string(weighted_report.trend_verdict) << ", counts "
            << to_string(counts_report.trend_verdict) << ", "
            << format_double(pair.weighted.wall_seconds) << " s\n";
  const bool fail = weighted_report.trend_verdict == TrendVerdict::Fail ||
                    counts_report.trend_verdict == TrendVerdict::Fail;
  return fail ? 2 : 0;
}

int cmd_verify(const std::string& suite, const CommonFlags& flags) {
  std::vector<verify::SuiteResult> results;
  if (suite.empty()) {
    results = verify::run_all(flags.engine());
  } else {
    results.push_back(verify::run_suite(suite, flags.engine()));  // throws on bad name
  }
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.detail << "  ("
              << format_double(r.seconds) << " s)\n";
  }
  return all_pass ? 0 : 2;
}

std::string default_cache_path(uint64_t limit) {
  const char* dir = std::getenv("ALLADI_CACHE");
  const fs::path base = dir && *dir ? fs::path(dir) : fs::path(".");
  return (base / ("spf-" + std::to_string(limit) + ".alsv")).string();
}

int cmd_sieve(const std::string& limit_str, std::string out) {
  const uint64_t limit = parse_xvalue(limit_str);
  if (limit < 2 || limit > FactorTable::kMaxLimit)
    throw std::invalid_argument("sieve limit must be in [2, 2^32 - 1]");
  if (out.empty()) out = default_cache_path(limit);
  const FactorTable table = build_factor_table(limit);
  table.save(out);
  std::cout << out << "\n";
  return 0;
}

// Smallest cached table covering n, if the cache directory has one.
std::optional<FactorTable> cached_table_covering(uint64_t n) {
  const char* dir = std::getenv("ALLADI_CACHE");
  if (!dir || !*dir || !fs::is_directory(dir)) return std::nullopt;
  uint64_t best = 0;
  fs::path best_path;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("spf-", 0) != 0 || name.find(".alsv") == std::string::npos) continue;
    try {
      const uint64_t limit = std::stoull(name.substr(4));
      if (limit >= n && (best == 0 || limit < best)) {
        best = limit;
        best_path = entry.path();
      }
    } catch (...) {
      continue;
    }
  }
  if (best == 0) return std::nullopt;
  try {
    return FactorTable::load(best_path.string());
  } catch (const std::exception& e) {
    std::cerr << "warning: ignoring unreadable cache " << best_path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_eval(const std::string& fn, const std::string& n_str, uint64_t k, uint64_t m) {
  const uint64_t n = parse_xvalue(n_str);
  if (fn == "classify") {
    NClassification c;
    if (auto table = cached_table_covering(n))
      c = table->classify(n);
    else
      c = oracles::classify_by_trial_division(n);
    std::cout << "n=" << c.n << " p=";
    if (c.spf == kSpfInfinity)
      std::cout << "inf";
    else
      std::cout << c.spf;
    std::cout << " P=" << c.lpf << " mu=" << int{c.mu} << " phi=" << c.phi
              << " lambda=" << int{c.lambda} << " Omega=" << c.big_omega << "\n";
    return 0;
  }
  if (fn == "sigma") {
    std::cout << sigma_k(n, static_cast<uint32_t>(k)) << "\n";
    return 0;
  }
  if (fn == "psi") {
    std::cout << dedekind_psi(n) << "\n";
    return 0;
  }
  if (fn == "ramanujan") {
    std::cout << ramanujan_sum(n, m) << "\n";
    return 0;
  }
  if (fn == "r4") {
    std::cout << r4(n) << "\n";
    return 0;
  }
  if (fn == "r8") {
    std::cout << r8(n) << "\n";
    return 0;
  }
  if (fn == "theta-e8") {
    std::cout << theta_coeff(Lattice::E8, n) << "\n";
    return 0;
  }
  if (fn == "theta-e8e8") {
    std::cout << theta_coeff(Lattice::E8PlusE8OrGamma16, n) << "\n";
    return 0;
  }
  throw std::invalid_argument("unknown eval function: '" + fn + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density series over smallest/largest prime factors"};
  app.require_subcommand(1);

  std::string weight_desc = "mu/n", set_desc, suite, limit_str, out_path, fn_name, n_str;
  uint64_t eval_k = 1, eval_m = 1;
  CommonFlags sum_flags, duality_flags, verify_flags;

  auto* sum = app.add_subcommand("sum", "weighted series with convergence report");
  sum->add_option("--weight", weight_desc, "weight descriptor (e.g. mu/phi)")->required();
  sum->add_option("--set", set_desc, "prime set descriptor (e.g. ap:4,1)")->required();
  sum_flags.attach(sum, true);

  std::string duality_weight = "mu/n";
  auto* duality = app.add_subcommand("duality", "both duality sides at shared checkpoints");
  duality->add_option("--set", set_desc, "prime set descriptor")->required();
  duality->add_option("--weight", duality_weight, "over-n weight (default mu/n)");
  duality_flags.attach(duality, true);

  auto* verify_cmd = app.add_subcommand("verify", "identity verification suites");
  verify_cmd->add_option("--suite", suite, "run a single suite by name");
  verify_flags.attach(verify_cmd, false);

  auto* sieve = app.add_subcommand("sieve", "build and save an SPF cache file");
  sieve->add_option("--limit", limit_str, "table limit")->required();
  sieve->add_option("--out", out_path, "output path (default $ALLADI_CACHE/spf-<limit>.alsv)");

  auto* eval = app.add_subcommand("eval", "evaluate one arithmetic function");
  eval->add_option("--fn", fn_name,
                   "classify | sigma | psi | ramanujan | r4 | r8 | theta-e8 | theta-e8e8")
      ->required();
  eval->add_option("--n", n_str, "argument n")->required();
  eval->add_option("--k", eval_k, "exponent for sigma");
  eval->add_option("--m", eval_m, "shift for ramanujan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sum->parsed()) return cmd_sum(weight_desc, set_desc, sum_flags);
    if (duality->parsed()) return cmd_duality(set_desc, duality_weight, duality_flags);
    if (verify_cmd->parsed()) return cmd_verify(suite, verify_flags);
    if (sieve->parsed()) return cmd_sieve(limit_str, out_path);
    if (eval->parsed()) return cmd_eval(fn_name, n_str, eval_k, eval_m);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
