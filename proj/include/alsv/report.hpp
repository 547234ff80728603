#pragma once
// Convergence diagnostics over checkpoint series and CSV/JSON emission.
// Files are byte-identical across runs with the same inputs: wall time is
// reported on the side channel, never serialized.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "alsv/sum_engine.hpp"

namespace alsv {

enum class TrendVerdict { Pass, Fail, Inconclusive };

std::string to_string(TrendVerdict v);

struct ReportMeta {
  std::string weight;
  std::string set;
  std::string mode;           // "float" | "exact"
  std::string target_source;  // "analytic" | "empirical" | "none"
  int window = 0;
  std::optional<std::string> alpha_hint;
  double wall_seconds = 0;  // not serialized

  bool operator==(const ReportMeta& o) const {
    return weight == o.weight && set == o.set && mode == o.mode &&
           target_source == o.target_source && window == o.window && alpha_hint == o.alpha_hint;
  }
};

struct ReportRow {
  uint64_t x = 0;
  double value = 0;
  std::optional<Rational> value_exact;  // exact mode only
  double target = 0;                    // NaN when no target
  std::optional<Rational> target_exact;
  double abs_error = 0;  // NaN when no target

  bool operator==(const ReportRow& o) const;
};

struct ConvergenceReport {
  ReportMeta meta;
  std::vector<ReportRow> rows;
  TrendVerdict trend_verdict = TrendVerdict::Inconclusive;
  double final_error = 0;

  bool operator==(const ConvergenceReport& o) const;
};

// Trend over the trailing `window` checkpoint steps: PASS iff each step's
// error is at most 1.05x the previous one (partial sums oscillate locally,
// strict monotonicity would flicker). Needs window+1 checkpoints. Without a
// target the verdict is Inconclusive.
inline constexpr double kTrendSlack = 1.05;

ConvergenceReport analyze(const CheckpointSeries& series, int window);

enum class ReportFormat { Csv, Json };

// CSV columns exactly: x,value,target,abs_error (shortest round-trip
// decimals). JSON object: {meta, rows, trend_verdict, final_error}; exact
// values are serialized as "num/den" strings.
void emit_csv(const ConvergenceReport& report, std::ostream& out);
void emit_json(const ConvergenceReport& report, std::ostream& out);
// log10_x,abs_error pairs for external plotting.
void emit_plot_csv(const ConvergenceReport& report, std::ostream& out);
// destination "-" writes to stdout.
void emit(const ConvergenceReport& report, ReportFormat format, const std::string& destination);

ConvergenceReport parse_json_report(const std::string& text);

// Paired emission for duality runs; both reports must share the x grid.
// Columns: x,alladi_value,duality_value,target.
void emit_duality_csv(const ConvergenceReport& weighted, const ConvergenceReport& counts,
                      std::ostream& out);
void emit_duality_json(const ConvergenceReport& weighted, const ConvergenceReport& counts,
                       std::ostream& out);

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace alsv
