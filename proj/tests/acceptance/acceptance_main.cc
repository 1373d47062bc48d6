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

// Acceptance suite: one PASS/FAIL line per criterion. Takes the path of the
// built command-line tool as its only argument; exits nonzero if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles/exact_oracles.hpp"
#include "oracles/reference_generators.hpp"
#include "rngbattery/rngbattery.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct ShellResult {
  int code;
  std::string out;
};

ShellResult Shell(const std::string& command) {
  std::FILE* p = ::popen((command + " 2>/dev/null").c_str(), "r");
  if (p == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// 1. Generator fidelity.
Verdict GeneratorFidelity() {
  const auto start = Clock::now();
  using rngbattery::Algorithm;
  using rngbattery::Generator;
  using rngbattery::Width;
  oracle::Mt19937Reference mt_ref(5489);
  Generator mt = Generator::Create(Algorithm::kMt19937, 5489);
  int mismatches = 0;
  for (int i = 0; i < 10; ++i) mismatches += mt.NextWord(Width::k32) != mt_ref.GenrandInt32();
  Generator pcg = Generator::Create(Algorithm::kPcg32, 5489);
  oracle::Pcg32Reference pcg_ref(5489, rngbattery::Pcg32::kStream);
  for (int i = 0; i < 10; ++i) mismatches += pcg.NextWord(Width::k32) != pcg_ref.Next();
  Generator xs = Generator::Create(Algorithm::kXorshift64Star, 1);
  std::uint64_t x = 1;
  for (int i = 0; i < 10; ++i) mismatches += xs.NextWord(Width::k64) != oracle::XorshiftStarStep(x);
  const double t = Seconds(start);
  return {mismatches == 0 && t < 1.0,
          Format("mismatches=%d over 30 outputs, %.3fs (limit 1s)", mismatches, t)};
}

// 2. Good generator through a real pipe passes at tiny and small sizes.
Verdict PipeAllPass(const std::string& cli) {
  std::string detail;
  bool ok = true;
  for (const char* size : {"--tiny", "--small"}) {
    int clean = 0;
    double worst = 0.0;
    for (int seed = 1; seed <= 100; ++seed) {
      const auto start = Clock::now();
      const auto r = Shell(cli + " emit -g mt19937 --seed " + std::to_string(seed) + " | " +
                           cli + " test --stdin64 -a " + size);
      worst = std::max(worst, Seconds(start));
      clean += r.code == 0 && r.out == "no anomalies in 5 test result(s)\n";
    }
    ok = ok && clean >= 95 && worst < 120.0;
    detail += Format("%s %d/100 clean (need 95), slowest run %.2fs; ", size, clean, worst);
  }
  return {ok, detail};
}

// 3. RANDU fails a structural test at tiny size for every seed.
Verdict RanduFails(const std::string& cli) {
  const auto start = Clock::now();
  int failing_seeds = 0;
  for (int seed = 1; seed <= 10; ++seed) {
    const auto r = Shell(cli + " test -g randu --seed " + std::to_string(seed) +
                         " -a --tiny --json");
    bool failed = false;
    try {
      const auto j = nlohmann::ordered_json::parse(r.out);
      for (const auto& item : j.at("results")) {
        const std::string name = item.at("test").get<std::string>();
        if (name != "birthday" && name != "perm5" && name != "equidist") continue;
        if (!item.at("p").is_null() && item.at("p").get<double>() < 1e-6) failed = true;
      }
    } catch (const nlohmann::json::exception&) {
    }
    failing_seeds += failed;
  }
  const double t = Seconds(start);
  return {failing_seeds == 10 && t < 30.0,
          Format("%d/10 seeds fail birthday/perm5/equidist at p<1e-6, %.2fs (limit 30s)",
                 failing_seeds, t)};
}

// 4. Craps win frequency against the exact 244/495.
Verdict CrapsCalibration() {
  const bool exact = oracle::CrapsWinProbabilityExact() == oracle::Rational(244, 495) &&
                     std::fabs(rngbattery::CrapsWinProbability() - 244.0 / 495.0) < 1e-15;
  constexpr std::uint64_t kGames = 200000;
  int within = 0;
  double worst = 0.0;
  std::vector<double> pvalues;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto stream = rngbattery::OpenGenerator(
        rngbattery::Generator::Create(rngbattery::Algorithm::kMt19937, seed),
        rngbattery::Width::k32, 0, "mt19937");
    const auto words = stream.NextWords(rngbattery::CrapsWordBound(kGames));
    const auto sim = rngbattery::SimulateCraps(words, rngbattery::Width::k32, kGames);
    if (!sim) continue;
    const double z = rngbattery::CrapsWinZ(*sim);
    worst = std::max(worst, std::fabs(z));
    within += std::fabs(z) <= 4.0;
    pvalues.push_back(rngbattery::NormalTailTwoSided(z).value());
  }
  const double ks_p = pvalues.size() >= 5 ? rngbattery::KsUniform(pvalues).p.value() : 0.0;
  return {exact && within == 100 && ks_p > 1e-3,
          Format("exact 244/495 %s; %d/100 seeds within 4 sigma (max |z|=%.2f); "
                 "KS p over z p-values=%.4g (need >1e-3)",
                 exact ? "confirmed" : "MISMATCH", within, worst, ks_p)};
}

// 5. Birthday duplicate mean near lambda = 2.
Verdict BirthdayCalibration() {
  // Brute-force oracle on toy instances first.
  std::mt19937_64 pick(5);
  int toy_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::uint64_t> b(2 + pick() % 30);
    for (auto& v : b) v = pick() >> 60;
    auto copy = b;
    toy_mismatch += rngbattery::SpacingDuplicates(copy) != oracle::SpacingDuplicatesByCounting(b);
  }
  const rngbattery::BirthdayConfig cfg;  // m = 512, bits = 24, reps = 500
  const double lambda = rngbattery::BirthdayLambda(cfg.m, cfg.bits);
  int in_range = 0;
  double lo = 1e9, hi = -1e9;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto stream = rngbattery::OpenGenerator(
        rngbattery::Generator::Create(rngbattery::Algorithm::kMt19937, seed),
        rngbattery::Width::k32, 0, "mt19937");
    const auto words = stream.NextWords(static_cast<std::size_t>(cfg.m * cfg.reps));
    const auto counts =
        rngbattery::BirthdayDuplicateCounts(words, rngbattery::Width::k32, cfg);
    const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) /
                        static_cast<double>(counts.size());
    lo = std::min(lo, mean);
    hi = std::max(hi, mean);
    in_range += mean >= 1.81 && mean <= 2.19;
  }
  return {toy_mismatch == 0 && lambda == 2.0 && in_range == 20,
          Format("lambda=%.6g, toy oracle mismatches=%d, %d/20 seeds in [1.81, 2.19] "
                 "(means %.3f..%.3f)",
                 lambda, toy_mismatch, in_range, lo, hi)};
}

// 6. Text format and binary round trips.
Verdict FormatRoundTrips() {
  const std::vector<std::uint64_t> expected{
      1343742658553450546ull, 16329942027498366702ull, 3111285719358198731ull,
      2966160837142136004ull, 17179712607770735227ull};
  const std::string example =
      "type: d\ncount: 5\nnumbit: 64\n1343742658553450546\n16329942027498366702\n"
      "3111285719358198731\n2966160837142136004\n17179712607770735227\n";
  const auto [header, parsed] =
      rngbattery::ReadTextAll(std::make_unique<std::istringstream>(example));
  const bool example_ok = parsed == expected && header.count == 5 && header.numbit == 64;

  std::mt19937_64 pick(606);
  int text_fail = 0, binary_fail = 0;
  for (rngbattery::Width width : {rngbattery::Width::k32, rngbattery::Width::k64}) {
    const unsigned numbit = rngbattery::WordBits(width);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<std::uint64_t> words(1 + pick() % 50);
      for (auto& w : words) w = numbit == 32 ? pick() >> 32 : pick();
      std::ostringstream out;
      rngbattery::WriteText(words, numbit, out);
      const auto back =
          rngbattery::ReadTextAll(std::make_unique<std::istringstream>(out.str())).second;
      text_fail += back != words;

      const auto& preset =
          rngbattery::kGeneratorPresets[pick() % rngbattery::kGeneratorPresets.size()];
      const std::uint64_t seed = 1 + pick() % 1000000;
      const std::size_t n = pick() % 100;
      auto emitter = rngbattery::Generator::FromPreset(preset, seed);
      auto mirror = rngbattery::Generator::FromPreset(preset, seed);
      std::vector<std::byte> bytes;
      rngbattery::EmitStream(emitter, width, n * rngbattery::WordBytes(width),
                             [&](std::span<const std::byte> c) {
                               bytes.insert(bytes.end(), c.begin(), c.end());
                               return true;
                             });
      const auto decoded = rngbattery::DecodeLittleEndian(bytes, width);
      bool same = decoded.size() == n;
      for (std::size_t i = 0; same && i < n; ++i) same = decoded[i] == mirror.NextWord(width);
      binary_fail += !same;
    }
  }
  return {example_ok && text_fail == 0 && binary_fail == 0,
          Format("example file %s; text round-trip failures %d/2000; emit/decode failures "
                 "%d/2000",
                 example_ok ? "exact" : "WRONG", text_fail, binary_fail)};
}

// 7. Numeric kernels.
Verdict NumericKernels() {
  const double c11 = rngbattery::Chi2Tail(1.0, 1).value();
  double worst_dof2 = 0.0;
  for (double s = 0.0; s <= 100.0; s += 0.05) {
    worst_dof2 = std::max(worst_dof2,
                          std::fabs(rngbattery::Chi2Tail(s, 2).value() - std::exp(-s / 2)));
  }
  double worst_ks = 0.0;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 5; n <= 20; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(n);
      for (auto& v : x) v = u(rng);
      const auto r = rngbattery::KsUniform(x);
      worst_ks = std::max(worst_ks, std::fabs(r.p.value() -
                                              oracle::KolmogorovPValueExact(n, r.statistic)));
    }
  }
  for (int n = 1; n <= 20; ++n) {
    for (double d = 0.5 / n; d < 1.0; d += 0.037) {
      worst_ks = std::max(worst_ks,
                          std::fabs((1.0 - rngbattery::detail::KolmogorovCdfExact(n, d)) -
                                    oracle::KolmogorovPValueExact(n, d)));
    }
  }
  const bool ok = std::fabs(c11 - 0.31731) <= 1e-4 && worst_dof2 <= 1e-12 && worst_ks <= 1e-6;
  return {ok, Format("chi2_tail(1,1)=%.6f; max |chi2_tail(s,2)-e^(-s/2)|=%.2e; "
                     "max KS deviation from exact DP (n<=20)=%.2e",
                     c11, worst_dof2, worst_ks)};
}

// 8. Determinism of JSON reports.
Verdict Determinism(const std::string& cli) {
  const std::string direct = cli + " test -g xorshift64star --seed 8 -a --tiny --json";
  const std::string piped = cli + " emit -g pcg32 --seed 8 --w32 | " + cli +
                            " test --stdin32 -a --tiny --json";
  const auto a = Shell(direct), b = Shell(direct);
  const auto c = Shell(piped), d = Shell(piped);
  const bool ok = !a.out.empty() && a.out == b.out && !c.out.empty() && c.out == d.out;
  return {ok, Format("generator run %s (%zu bytes), pipe run %s (%zu bytes)",
                     a.out == b.out ? "identical" : "DIFFERENT", a.out.size(),
                     c.out == d.out ? "identical" : "DIFFERENT", c.out.size())};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s PATH_TO_RNGBATTERY\n", argv[0]);
    return 64;
  }
  const std::string cli = argv[1];
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"generator fidelity", GeneratorFidelity},
      {"mt19937 pipe all-pass", [&] { return PipeAllPass(cli); }},
      {"randu fails", [&] { return RanduFails(cli); }},
      {"craps calibration", CrapsCalibration},
      {"birthday calibration", BirthdayCalibration},
      {"format round trips", FormatRoundTrips},
      {"numeric kernels", NumericKernels},
      {"json determinism", [&] { return Determinism(cli); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    const Verdict v = criteria[i].second();
    failures += !v.ok;
    std::printf("criterion %zu (%s): %s - %s[%.1fs]\n", i + 1, criteria[i].first,
                v.ok ? "PASS" : "FAIL", v.detail.c_str(), Seconds(start));
    std::fflush(stdout);
  }
  std::printf("acceptance: %d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
