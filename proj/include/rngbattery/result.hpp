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

#ifndef RNGBATTERY_RESULT_HPP_
#define RNGBATTERY_RESULT_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "rngbattery/stats.hpp"

namespace rngbattery {

enum class Classification { kPass, kWeak, kFail, kNotRun };

inline constexpr double kFailThreshold = 1e-6;
inline constexpr double kWeakThreshold = 1e-3;

// Two-sided: a p-value stuck near 1 is as suspicious as one near 0.
constexpr Classification Classify(PValue p) {
  const double v = p.value();
  if (v < kFailThreshold || v > 1.0 - kFailThreshold) return Classification::kFail;
  if (v < kWeakThreshold || v > 1.0 - kWeakThreshold) return Classification::kWeak;
  return Classification::kPass;
}

constexpr std::string_view ClassificationName(Classification c) {
  switch (c) {
    case Classification::kPass: return "pass";
    case Classification::kWeak: return "weak";
    case Classification::kFail: return "fail";
    case Classification::kNotRun: return "not_run";
  }
  return "unknown";
}

inline std::optional<Classification> ParseClassification(std::string_view s) {
  for (auto c : {Classification::kPass, Classification::kWeak,
                 Classification::kFail, Classification::kNotRun}) {
    if (ClassificationName(c) == s) return c;
  }
  return std::nullopt;
}

struct TestResult {
  std::string test_name;
  std::uint64_t n_consumed_words = 0;
  // NaN when the test did not run.
  double statistic = std::numeric_limits<double>::quiet_NaN();
  // Degrees of freedom for chi-squared tests, lambda for birthday spacings,
  // z for the normal-approximation tests.
  double param = std::numeric_limits<double>::quiet_NaN();
  std::optional<PValue> p;
  Classification classification = Classification::kNotRun;
  std::string notes;

  static TestResult Completed(std::string name, std::uint64_t words,
                              double statistic, double param, PValue p,
                              std::string notes = {}) {
    return {std::move(name), words, statistic, param, p, Classify(p),
            std::move(notes)};
  }

  static TestResult NotRun(std::string name, std::uint64_t words,
                           std::string reason) {
    TestResult r;
    r.test_name = std::move(name);
    r.n_consumed_words = words;
    r.notes = std::move(reason);
    return r;
  }
};

}  // namespace rngbattery

#endif  // RNGBATTERY_RESULT_HPP_
