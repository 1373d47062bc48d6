// Copyright 2026 The rngbattery Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNGBATTERY_REPORT_HPP_
#define RNGBATTERY_REPORT_HPP_

// Battery reports and their renderings.
//
// Text format (version 1), one line per result:
//
//   <name>  n=<words>  stat=<%.6g or ->  p=<%.6g or ->  PASS|WEAK|FAIL|NOT_RUN
//
// matched by
//
//   ^(\S+)  n=(\d+)  stat=(\S+)  p=(\S+)  (PASS|WEAK|FAIL|NOT_RUN)$
//
// In anomalies-only mode PASS lines are omitted. Full mode adds
//
//   summary: pass=<a> weak=<b> fail=<c> not_run=<d>
//
// Both modes end with the verdict line, which is exactly
// "no anomalies in <N> test result(s)" when every result passed.
//
// JSON uses the key order written by ReportToJson and is versioned by the
// "version" key.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rngbattery/errors.hpp"
#include "rngbattery/result.hpp"

namespace rngbattery {

inline constexpr int kReportVersion = 1;

struct ReportCounts {
  std::uint64_t pass = 0;
  std::uint64_t weak = 0;
  std::uint64_t fail = 0;
  std::uint64_t not_run = 0;

  friend bool operator==(const ReportCounts&, const ReportCounts&) = default;
};

struct BatteryReport {
  std::vector<TestResult> results;
  ReportCounts counts;
  std::uint64_t total_words = 0;
  std::string stream_descriptor;
  std::string verdict_line;
};

inline std::string VerdictLine(const ReportCounts& c, std::uint64_t total) {
  if (c.weak == 0 && c.fail == 0 && c.not_run == 0) {
    return "no anomalies in " + std::to_string(c.pass) + " test result(s)";
  }
  return "anomalies in " + std::to_string(c.weak + c.fail + c.not_run) +
         " of " + std::to_string(total) + " test result(s): weak=" +
         std::to_string(c.weak) + " fail=" + std::to_string(c.fail) +
         " not_run=" + std::to_string(c.not_run);
}

inline BatteryReport MakeReport(std::vector<TestResult> results,
                                std::uint64_t total_words,
                                std::string descriptor) {
  BatteryReport report;
  for (const auto& r : results) {
    switch (r.classification) {
      case Classification::kPass: ++report.counts.pass; break;
      case Classification::kWeak: ++report.counts.weak; break;
      case Classification::kFail: ++report.counts.fail; break;
      case Classification::kNotRun: ++report.counts.not_run; break;
    }
  }
  report.verdict_line = VerdictLine(report.counts, results.size());
  report.results = std::move(results);
  report.total_words = total_words;
  report.stream_descriptor = std::move(descriptor);
  return report;
}

// 0 all pass, 1 weak only, 2 any failure or test that could not run.
inline int ExitCode(const BatteryReport& report) {
  if (report.counts.fail > 0 || report.counts.not_run > 0) return 2;
  if (report.counts.weak > 0) return 1;
  return 0;
}

enum class ReportFormat { kText, kJson };
enum class Verbosity { kAnomaliesOnly, kFull };

namespace detail {

inline std::string FormatNumber(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string UpperClass(Classification c) {
  std::string s(ClassificationName(c));
  for (char& ch : s) ch = static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 32 : ch);
  return s;
}

inline nlohmann::ordered_json NumberOrNull(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline double NumberFromJson(const nlohmann::ordered_json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace detail

inline std::string RenderResultLine(const TestResult& r) {
  return r.test_name + "  n=" + std::to_string(r.n_consumed_words) +
         "  stat=" + detail::FormatNumber(r.statistic) + "  p=" +
         (r.p ? detail::FormatNumber(r.p->value()) : std::string("-")) + "  " +
         detail::UpperClass(r.classification);
}

inline nlohmann::ordered_json ReportToJson(const BatteryReport& report) {
  nlohmann::ordered_json j;
  j["format"] = "rngbattery-report";
  j["version"] = kReportVersion;
  j["stream"] = report.stream_descriptor;
  j["total_words"] = report.total_words;
  auto results = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    nlohmann::ordered_json item;
    item["test"] = r.test_name;
    item["n_words"] = r.n_consumed_words;
    item["statistic"] = detail::NumberOrNull(r.statistic);
    item["param"] = detail::NumberOrNull(r.param);
    item["p"] = r.p ? nlohmann::ordered_json(r.p->value()) : nlohmann::ordered_json();
    item["class"] = ClassificationName(r.classification);
    item["notes"] = r.notes;
    results.push_back(std::move(item));
  }
  j["results"] = std::move(results);
  j["counts"] = {{"pass", report.counts.pass},
                 {"weak", report.counts.weak},
                 {"fail", report.counts.fail},
                 {"not_run", report.counts.not_run}};
  j["verdict"] = report.verdict_line;
  return j;
}

inline BatteryReport ReportFromJson(const nlohmann::ordered_json& j) {
  try {
    if (j.at("version").get<int>() != kReportVersion) {
      throw Error(ErrorCode::kBadInput, "unsupported report version");
    }
    BatteryReport report;
    report.stream_descriptor = j.at("stream").get<std::string>();
    report.total_words = j.at("total_words").get<std::uint64_t>();
    for (const auto& item : j.at("results")) {
      TestResult r;
      r.test_name = item.at("test").get<std::string>();
      r.n_consumed_words = item.at("n_words").get<std::uint64_t>();
      r.statistic = detail::NumberFromJson(item.at("statistic"));
      r.param = detail::NumberFromJson(item.at("param"));
      if (!item.at("p").is_null()) r.p = PValue(item.at("p").get<double>());
      const auto cls = ParseClassification(item.at("class").get<std::string>());
      if (!cls) throw Error(ErrorCode::kBadInput, "unknown class");
      r.classification = *cls;
      r.notes = item.at("notes").get<std::string>();
      report.results.push_back(std::move(r));
    }
    const auto& c = j.at("counts");
    report.counts = {c.at("pass").get<std::uint64_t>(),
                     c.at("weak").get<std::uint64_t>(),
                     c.at("fail").get<std::uint64_t>(),
                     c.at("not_run").get<std::uint64_t>()};
    report.verdict_line = j.at("verdict").get<std::string>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadInput, std::string("malformed report: ") + e.what());
  }
}

inline std::string Render(const BatteryReport& report, ReportFormat format,
                          Verbosity verbosity) {
  if (format == ReportFormat::kJson) return ReportToJson(report).dump(2) + "\n";
  std::string out;
  for (const auto& r : report.results) {
    if (verbosity == Verbosity::kAnomaliesOnly &&
        r.classification == Classification::kPass) {
      continue;
    }
    out += RenderResultLine(r);
    out += '\n';
  }
  if (verbosity == Verbosity::kFull) {
    out += "summary: pass=" + std::to_string(report.counts.pass) +
           " weak=" + std::to_string(report.counts.weak) +
           " fail=" + std::to_string(report.counts.fail) +
           " not_run=" + std::to_string(report.counts.not_run) + "\n";
  }
  out += report.verdict_line;
  out += '\n';
  return out;
}

}  // namespace rngbattery

#endif  // RNGBATTERY_REPORT_HPP_
