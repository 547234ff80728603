#include "alsv/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace alsv {

namespace {
using nlohmann::ordered_json;

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string to_string(TrendVerdict v) {
  switch (v) {
    case TrendVerdict::Pass: return "PASS";
    case TrendVerdict::Fail: return "FAIL";
    case TrendVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

bool ReportRow::operator==(const ReportRow& o) const {
  return x == o.x && same_double(value, o.value) && value_exact == o.value_exact &&
         same_double(target, o.target) && target_exact == o.target_exact &&
         same_double(abs_error, o.abs_error);
}

bool ConvergenceReport::operator==(const ConvergenceReport& o) const {
  return meta == o.meta && rows == o.rows && trend_verdict == o.trend_verdict &&
         same_double(final_error, o.final_error);
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

ConvergenceReport analyze(const CheckpointSeries& series, int window) {
  if (window < 0) throw std::domain_error("analyze: window must be >= 0");
  const size_t n = series.checkpoints.size();
  if (n < static_cast<size_t>(window) + 1)
    throw std::domain_error("analyze: need at least window + 1 checkpoints");

  ConvergenceReport report;
  report.meta.weight = series.weight_descriptor();
  report.meta.set = series.set.descriptor();
  report.meta.mode = to_string(series.mode);
  report.meta.window = window;
  report.meta.wall_seconds = series.wall_seconds;
  if (series.weight && series.weight->alpha_hint)
    report.meta.alpha_hint = series.weight->alpha_hint->str();

  const auto& analytic = series.set.analytic_density();
  if (!series.target)
    report.meta.target_source = "none";
  else if (analytic && *analytic == *series.target)
    report.meta.target_source = "analytic";
  else
    report.meta.target_source = "empirical";

  for (size_t i = 0; i < n; ++i) {
    ReportRow row;
    row.x = series.checkpoints[i];
    row.value = series.value_as_double(i);
    if (series.mode == SumMode::Exact) row.value_exact = series.values_exact[i];
    if (series.target) {
      row.target = series.target->to_double();
      if (series.mode == SumMode::Exact) {
        row.target_exact = *series.target;
        row.abs_error = abs(series.values_exact[i] - *series.target).to_double();
      } else {
        row.abs_error = std::abs(row.value - row.target);
      }
    } else {
      row.target = kNan;
      row.abs_error = kNan;
    }
    report.rows.push_back(std::move(row));
  }

  report.final_error = report.rows.back().abs_error;
  if (!series.target) {
    report.trend_verdict = TrendVerdict::Inconclusive;
  } else {
    bool pass = true;
    for (size_t i = n - 1 - static_cast<size_t>(window); i + 1 < n; ++i)
      if (report.rows[i + 1].abs_error > kTrendSlack * report.rows[i].abs_error) pass = false;
    report.trend_verdict = pass ? TrendVerdict::Pass : TrendVerdict::Fail;
  }
  return report;
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

void emit_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "x,value,target,abs_error\n";
  for (const auto& row : report.rows) {
    out << row.x << ',' << format_double(row.value) << ',';
    if (!std::isnan(row.target)) out << format_double(row.target);
    out << ',';
    if (!std::isnan(row.abs_error)) out << format_double(row.abs_error);
    out << '\n';
  }
  if (!out) throw std::runtime_error("emit_csv: write failed");
}

void emit_plot_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "log10_x,abs_error\n";
  for (const auto& row : report.rows) {
    out << format_double(std::log10(static_cast<double>(row.x))) << ',';
    if (!std::isnan(row.abs_error)) out << format_double(row.abs_error);
    out << '\n';
  }
  if (!out) throw std::runtime_error("emit_plot_csv: write failed");
}

namespace {

ordered_json meta_to_json(const ReportMeta& meta) {
  ordered_json j;
  j["weight"] = meta.weight;
  j["set"] = meta.set;
  j["mode"] = meta.mode;
  j["target_source"] = meta.target_source;
  j["window"] = meta.window;
  if (meta.alpha_hint) j["alpha_hint"] = *meta.alpha_hint;
  return j;
}

ordered_json row_to_json(const ReportRow& row) {
  ordered_json j;
  j["x"] = row.x;
  if (row.value_exact)
    j["value"] = row.value_exact->str();
  else
    j["value"] = row.value;
  if (std::isnan(row.target))
    j["target"] = nullptr;
  else if (row.target_exact)
    j["target"] = row.target_exact->str();
  else
    j["target"] = row.target;
  if (std::isnan(row.abs_error))
    j["abs_error"] = nullptr;
  else
    j["abs_error"] = row.abs_error;
  return j;
}

}  // namespace

void emit_json(const ConvergenceReport& report, std::ostream& out) {
  ordered_json j;
  j["meta"] = meta_to_json(report.meta);
  j["rows"] = ordered_json::array();
  for (const auto& row : report.rows) j["rows"].push_back(row_to_json(row));
  j["trend_verdict"] = to_string(report.trend_verdict);
  if (std::isnan(report.final_error))
    j["final_error"] = nullptr;
  else
    j["final_error"] = report.final_error;
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("emit_json: write failed");
}

void emit(const ConvergenceReport& report, ReportFormat format, const std::string& destination) {
  auto write = [&](std::ostream& out) {
    if (format == ReportFormat::Csv)
      emit_csv(report, out);
    else
      emit_json(report, out);
  };
  if (destination == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(destination);
  if (!out) throw std::runtime_error("cannot open for writing: " + destination);
  write(out);
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

TrendVerdict verdict_from_string(const std::string& s) {
  if (s == "PASS") return TrendVerdict::Pass;
  if (s == "FAIL") return TrendVerdict::Fail;
  if (s == "INCONCLUSIVE") return TrendVerdict::Inconclusive;
  throw std::invalid_argument("bad trend verdict: '" + s + "'");
}

}  // namespace

ConvergenceReport parse_json_report(const std::string& text) {
  const auto j = ordered_json::parse(text);
  ConvergenceReport report;
  const auto& meta = j.at("meta");
  report.meta.weight = meta.at("weight").get<std::string>();
  report.meta.set = meta.at("set").get<std::string>();
  report.meta.mode = meta.at("mode").get<std::string>();
  report.meta.target_source = meta.at("target_source").get<std::string>();
  report.meta.window = meta.at("window").get<int>();
  if (meta.contains("alpha_hint")) report.meta.alpha_hint = meta.at("alpha_hint").get<std::string>();

  for (const auto& jr : j.at("rows")) {
    ReportRow row;
    row.x = jr.at("x").get<uint64_t>();
    if (jr.at("value").is_string()) {
      row.value_exact = Rational::parse(jr.at("value").get<std::string>());
      row.value = row.value_exact->to_double();
    } else {
      row.value = jr.at("value").get<double>();
    }
    if (jr.at("target").is_null()) {
      row.target = kNan;
    } else if (jr.at("target").is_string()) {
      row.target_exact = Rational::parse(jr.at("target").get<std::string>());
      row.target = row.target_exact->to_double();
    } else {
      row.target = jr.at("target").get<double>();
      row.target_exact = std::nullopt;
    }
    row.abs_error = jr.at("abs_error").is_null() ? kNan : jr.at("abs_error").get<double>();
    report.rows.push_back(std::move(row));
  }
  report.trend_verdict = verdict_from_string(j.at("trend_verdict").get<std::string>());
  report.final_error = j.at("final_error").is_null() ? kNan : j.at("final_error").get<double>();
  return report;
}

// ---------------------------------------------------------------------------
// duality emission
// ---------------------------------------------------------------------------

namespace {
void check_same_grid(const ConvergenceReport& a, const ConvergenceReport& b) {
  if (a.rows.size() != b.rows.size())
    throw std::domain_error("duality emission: row counts differ");
  for (size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i].x != b.rows[i].x) throw std::domain_error("duality emission: x grids differ");
}
}  // namespace

void emit_duality_csv(const ConvergenceReport& weighted, const ConvergenceReport& counts,
                      std::ostream& out) {
  check_same_grid(weighted, counts);
  out << "x,alladi_value,duality_value,target\n";
  for (size_t i = 0; i < weighted.rows.size(); ++i) {
    out << weighted.rows[i].x << ',' << format_double(weighted.rows[i].value) << ','
        << format_double(counts.rows[i].value) << ',';
    if (!std::isnan(weighted.rows[i].target)) out << format_double(weighted.rows[i].target);
    out << '\n';
  }
  if (!out) throw std::runtime_error("emit_duality_csv: write failed");
}

void emit_duality_json(const ConvergenceReport& weighted, const ConvergenceReport& counts,
                       std::ostream& out) {
  check_same_grid(weighted, counts);
  ordered_json j;
  j["meta"] = meta_to_json(weighted.meta);
  j["rows"] = ordered_json::array();
  for (size_t i = 0; i < weighted.rows.size(); ++i) {
    ordered_json jr;
    jr["x"] = weighted.rows[i].x;
    if (weighted.rows[i].value_exact)
      jr["alladi_value"] = weighted.rows[i].value_exact->str();
    else
      jr["alladi_value"] = weighted.rows[i].value;
    if (counts.rows[i].value_exact)
      jr["duality_value"] = counts.rows[i].value_exact->str();
    else
      jr["duality_value"] = counts.rows[i].value;
    if (std::isnan(weighted.rows[i].target))
      jr["target"] = nullptr;
    else if (weighted.rows[i].target_exact)
      jr["target"] = weighted.rows[i].target_exact->str();
    else
      jr["target"] = weighted.rows[i].target;
    j["rows"].push_back(std::move(jr));
  }
  j["alladi_trend"] = to_string(weighted.trend_verdict);
  j["duality_trend"] = to_string(counts.trend_verdict);
  j["alladi_final_error"] = std::isnan(weighted.final_error) ? ordered_json(nullptr)
                                                             : ordered_json(weighted.final_error);
  j["duality_final_error"] =
      std::isnan(counts.final_error) ? ordered_json(nullptr) : ordered_json(counts.final_error);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("emit_duality_json: write failed");
}

}  // namespace alsv
