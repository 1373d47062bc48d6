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

#ifndef RNGBATTERY_BATTERY_HPP_
#define RNGBATTERY_BATTERY_HPP_

// The statistical tests and the orchestration that runs them over one
// sequential pass of a WordStream.
//
// Each test has a pure form taking a span of words (the unit tests and the
// acceptance suite drive these directly) and is wrapped by RunBattery, which
// slices consecutive segments off the stream in the fixed order
//
//   monobit, equidist, birthday, perm5, craps
//
// When the byte budget cannot cover every selected test at its default size,
// all sample counts are scaled down by one common factor (never below each
// test's floor); tests whose floor does not fit are reported as not run.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rngbattery/errors.hpp"
#include "rngbattery/generators.hpp"
#include "rngbattery/ingest.hpp"
#include "rngbattery/report.hpp"
#include "rngbattery/result.hpp"
#include "rngbattery/stats.hpp"

namespace rngbattery {

enum class TestId { kMonobit, kEquidist, kBirthday, kPerm5, kCraps };

inline constexpr std::array<TestId, 5> kTestOrder{
    TestId::kMonobit, TestId::kEquidist, TestId::kBirthday, TestId::kPerm5,
    TestId::kCraps};

constexpr std::string_view TestName(TestId id) {
  switch (id) {
    case TestId::kMonobit: return "monobit";
    case TestId::kEquidist: return "equidist";
    case TestId::kBirthday: return "birthday";
    case TestId::kPerm5: return "perm5";
    case TestId::kCraps: return "craps";
  }
  return "unknown";
}

constexpr std::string_view TestDescription(TestId id) {
  switch (id) {
    case TestId::kMonobit: return "bit frequency (ones vs zeros), normal approximation";
    case TestId::kEquidist: return "top-bits cell occupancy, chi-squared";
    case TestId::kBirthday: return "birthday spacings duplicate count vs Poisson, chi-squared";
    case TestId::kPerm5: return "orderings of 5-tuples (disjoint variant), chi-squared 119 dof";
    case TestId::kCraps: return "craps wins z-test and throws-per-game chi-squared";
  }
  return "";
}

// Accepts a test name or its position in kTestOrder.
inline std::optional<TestId> ParseTestId(std::string_view s) {
  for (std::size_t i = 0; i < kTestOrder.size(); ++i) {
    if (TestName(kTestOrder[i]) == s || std::to_string(i) == s) {
      return kTestOrder[i];
    }
  }
  return std::nullopt;
}

struct MonobitConfig {
  std::uint64_t bits = 100'000'000;
};
struct EquidistConfig {
  std::uint64_t cells = 1u << 16;  // power of two
  std::uint64_t samples = 10'000'000;
};
struct BirthdayConfig {
  std::uint64_t m = 512;
  unsigned bits = 24;
  std::uint64_t reps = 500;
};
struct Perm5Config {
  std::uint64_t tuples = 1'000'000;
};
struct CrapsConfig {
  std::uint64_t games = 200'000;
};

struct TestConfig {
  MonobitConfig monobit;
  EquidistConfig equidist;
  BirthdayConfig birthday;
  Perm5Config perm5;
  CrapsConfig craps;
  std::uint64_t second_level_reps = 0;

  void Validate(Width width) const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw Error(ErrorCode::kInvalidParams, what);
    };
    require(monobit.bits >= 1, "monobit.bits must be >= 1");
    require(equidist.cells >= 2 && std::has_single_bit(equidist.cells),
            "equidist.cells must be a power of two >= 2");
    require(std::bit_width(equidist.cells) - 1 <= WordBits(width),
            "equidist.cells needs more bits than the word width");
    require(equidist.samples >= 5 * equidist.cells,
            "equidist.samples must be >= 5 * cells");
    require(birthday.m >= 2, "birthday.m must be >= 2");
    require(birthday.bits >= 1 && birthday.bits <= WordBits(width),
            "birthday.bits must be in [1, word width]");
    require(birthday.reps >= 1, "birthday.reps must be >= 1");
    require(perm5.tuples >= 1, "perm5.tuples must be >= 1");
    require(craps.games >= 1, "craps.games must be >= 1");
    require(second_level_reps == 0 || second_level_reps >= 5,
            "second-level testing needs >= 5 repetitions");
  }
};

// ---------------------------------------------------------------------------
// Chi-squared against a discrete distribution with sparse-bin merging.

struct BinnedChiSquare {
  double statistic = 0.0;
  std::uint64_t dof = 0;
  std::size_t bins = 0;
};

// `observed[i]` and `probabilities[i]` describe the same outcome class; the
// probabilities must cover the whole distribution. Adjacent classes are merged
// left to right until each expected count reaches `min_expected`, and a short
// remainder is folded into the last bin.
inline BinnedChiSquare ChiSquareMerged(std::span<const std::uint64_t> observed,
                                       std::span<const double> probabilities,
                                       double min_expected = 5.0) {
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  std::vector<double> obs_bins;
  std::vector<double> exp_bins;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += probabilities[i] * total;
    if (e_acc >= min_expected) {
      obs_bins.push_back(o_acc);
      exp_bins.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (o_acc != 0.0 || e_acc != 0.0) {
    if (exp_bins.empty()) {
      obs_bins.push_back(o_acc);
      exp_bins.push_back(e_acc);
    } else {
      obs_bins.back() += o_acc;
      exp_bins.back() += e_acc;
    }
  }
  if (exp_bins.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput,
                "too few samples for a chi-squared test with expected counts >= 5");
  }
  return {ChiSquareStatistic(obs_bins, exp_bins), exp_bins.size() - 1,
          exp_bins.size()};
}

// ---------------------------------------------------------------------------
// Monobit

inline std::uint64_t MonobitWords(std::uint64_t bits, Width width) {
  return (bits + WordBits(width) - 1) / WordBits(width);
}

// Bits are taken least significant first within each word; a partial final
// word contributes its low bits only.
inline TestResult Monobit(std::span<const std::uint64_t> words, Width width,
                          const MonobitConfig& cfg) {
  const std::uint64_t needed = MonobitWords(cfg.bits, width);
  if (words.size() < needed) {
    throw Error(ErrorCode::kStreamExhausted, "monobit needs " +
                                                 std::to_string(needed) + " words");
  }
  std::uint64_t ones = 0;
  std::uint64_t remaining = cfg.bits;
  for (std::size_t i = 0; i < needed; ++i) {
    std::uint64_t w = words[i];
    const unsigned take = static_cast<unsigned>(
        std::min<std::uint64_t>(remaining, WordBits(width)));
    if (take < 64) w &= (std::uint64_t{1} << take) - 1;
    ones += static_cast<std::uint64_t>(std::popcount(w));
    remaining -= take;
  }
  const double n = static_cast<double>(cfg.bits);
  const double excess = 2.0 * static_cast<double>(ones) - n;
  const double z = excess / std::sqrt(n);
  return TestResult::Completed("monobit", needed, excess, z,
                               NormalTailTwoSided(z),
                               std::to_string(cfg.bits) + " bits");
}

// ---------------------------------------------------------------------------
// Equidistribution of the top log2(cells) bits

inline TestResult Equidistribution(std::span<const std::uint64_t> words,
                                   Width width, const EquidistConfig& cfg) {
  if (words.size() < cfg.samples) {
    throw Error(ErrorCode::kStreamExhausted,
                "equidist needs " + std::to_string(cfg.samples) + " words");
  }
  const unsigned cell_bits = static_cast<unsigned>(std::bit_width(cfg.cells) - 1);
  const unsigned shift = WordBits(width) - cell_bits;
  std::vector<std::uint64_t> counts(cfg.cells, 0);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    ++counts[shift >= 64 ? 0 : words[i] >> shift];
  }
  const double expected =
      static_cast<double>(cfg.samples) / static_cast<double>(cfg.cells);
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d;
  }
  stat /= expected;
  const auto dof = cfg.cells - 1;
  return TestResult::Completed("equidist", cfg.samples, stat,
                               static_cast<double>(dof), Chi2Tail(stat, dof),
                               std::to_string(cfg.cells) + " cells");
}

// ---------------------------------------------------------------------------
// Birthday spacings

// lambda = m^3 / (4 * 2^bits)
inline double BirthdayLambda(std::uint64_t m, unsigned bits) {
  const double md = static_cast<double>(m);
  return md * md * md / std::ldexp(4.0, static_cast<int>(bits));
}

// Number of spacings equal to their predecessor once the m - 1 adjacent
// spacings of the sorted birthdays are themselves sorted (no wraparound).
inline std::uint64_t SpacingDuplicates(std::span<std::uint64_t> birthdays) {
  std::sort(birthdays.begin(), birthdays.end());
  if (birthdays.size() < 3) return 0;
  std::vector<std::uint64_t> spacings(birthdays.size() - 1);
  for (std::size_t i = 1; i < birthdays.size(); ++i) {
    spacings[i - 1] = birthdays[i] - birthdays[i - 1];
  }
  std::sort(spacings.begin(), spacings.end());
  std::uint64_t dups = 0;
  for (std::size_t i = 1; i < spacings.size(); ++i) {
    if (spacings[i] == spacings[i - 1]) ++dups;
  }
  return dups;
}

// Duplicate count J for each repetition.
inline std::vector<std::uint64_t> BirthdayDuplicateCounts(
    std::span<const std::uint64_t> words, Width width,
    const BirthdayConfig& cfg) {
  const std::uint64_t needed = cfg.m * cfg.reps;
  if (words.size() < needed) {
    throw Error(ErrorCode::kStreamExhausted,
                "birthday needs " + std::to_string(needed) + " words");
  }
  const unsigned shift = WordBits(width) - cfg.bits;
  std::vector<std::uint64_t> counts(cfg.reps);
  std::vector<std::uint64_t> birthdays(cfg.m);
  for (std::uint64_t r = 0; r < cfg.reps; ++r) {
    for (std::uint64_t i = 0; i < cfg.m; ++i) {
      const std::uint64_t w = words[r * cfg.m + i];
      birthdays[i] = shift >= 64 ? 0 : w >> shift;
    }
    counts[r] = SpacingDuplicates(birthdays);
  }
  return counts;
}

inline TestResult BirthdaySpacings(std::span<const std::uint64_t> words,
                                   Width width, const BirthdayConfig& cfg) {
  const auto counts = BirthdayDuplicateCounts(words, width, cfg);
  const double lambda = BirthdayLambda(cfg.m, cfg.bits);
  std::uint64_t max_seen = 0;
  double sum = 0.0;
  for (auto c : counts) {
    max_seen = std::max(max_seen, c);
    sum += static_cast<double>(c);
  }
  const auto tail_start = std::max<std::uint64_t>(
      max_seen + 1,
      static_cast<std::uint64_t>(lambda + 10.0 * std::sqrt(lambda) + 10.0));
  std::vector<std::uint64_t> observed(tail_start + 1, 0);
  std::vector<double> probs(tail_start + 1, 0.0);
  for (auto c : counts) ++observed[c];
  for (std::uint64_t k = 0; k < tail_start; ++k) probs[k] = PoissonPmf(k, lambda);
  probs[tail_start] = PoissonUpperTail(tail_start, lambda);
  const auto chi = ChiSquareMerged(observed, probs);
  char notes[128];
  std::snprintf(notes, sizeof notes, "m=%llu bits=%u reps=%llu mean_dups=%.4f",
                static_cast<unsigned long long>(cfg.m), cfg.bits,
                static_cast<unsigned long long>(cfg.reps),
                sum / static_cast<double>(cfg.reps));
  return TestResult::Completed("birthday", cfg.m * cfg.reps, chi.statistic,
                               lambda, Chi2Tail(chi.statistic, chi.dof), notes);
}

// ---------------------------------------------------------------------------
// Orderings of 5-tuples

// Lehmer-code rank of the ordering of a 5-tuple in [0, 120): the sorted
// tuple is 0, the reversed one 119. Tuples with ties have no ordering.
inline std::optional<unsigned> Perm5Rank(std::span<const std::uint64_t, 5> t) {
  constexpr std::array<unsigned, 5> kFactorial{24, 6, 2, 1, 1};
  unsigned rank = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    unsigned smaller = 0;
    for (std::size_t j = i + 1; j < 5; ++j) {
      if (t[j] == t[i]) return std::nullopt;
      if (t[j] < t[i]) ++smaller;
    }
    rank += smaller * kFactorial[i];
  }
  return rank;
}

// Disjoint consecutive tuples, so the 120 counts are multinomial and the
// plain chi-squared with 119 dof applies.
inline TestResult OverlappingPermutations(std::span<const std::uint64_t> words,
                                          const Perm5Config& cfg) {
  const std::uint64_t needed = 5 * cfg.tuples;
  if (words.size() < needed) {
    throw Error(ErrorCode::kStreamExhausted,
                "perm5 needs " + std::to_string(needed) + " words");
  }
  std::array<std::uint64_t, 120> counts{};
  std::uint64_t ties = 0;
  for (std::uint64_t t = 0; t < cfg.tuples; ++t) {
    const auto rank =
        Perm5Rank(std::span<const std::uint64_t, 5>(words.data() + 5 * t, 5));
    if (rank) {
      ++counts[*rank];
    } else {
      ++ties;
    }
  }
  const std::uint64_t kept = cfg.tuples - ties;
  if (kept == 0) {
    throw Error(ErrorCode::kDegenerateInput,
                "every 5-tuple contains a tie (constant stream?)");
  }
  const double expected = static_cast<double>(kept) / 120.0;
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d;
  }
  stat /= expected;
  return TestResult::Completed(
      "perm5", needed, stat, 119.0, Chi2Tail(stat, 119),
      "disjoint variant; tuples=" + std::to_string(cfg.tuples) +
          " ties_discarded=" + std::to_string(ties));
}

// ---------------------------------------------------------------------------
// Craps

inline constexpr std::size_t kCrapsThrowBins = 21;  // 1..20 and >= 21

// Come-out sum probabilities in 36ths, indexed by sum.
inline constexpr std::array<int, 13> kDiceSumWays{0, 0, 1, 2, 3, 4, 5,
                                                  6, 5, 4, 3, 2, 1};

constexpr bool IsPoint(int sum) {
  return sum == 4 || sum == 5 || sum == 6 || sum == 8 || sum == 9 || sum == 10;
}

// P(win) = 8/36 + sum over points of P(point) * P(point before 7).
inline double CrapsWinProbability() {
  double p = 8.0 / 36.0;
  for (int s = 4; s <= 10; ++s) {
    if (!IsPoint(s)) continue;
    const double ways = kDiceSumWays[s];
    p += ways / 36.0 * ways / (ways + 6.0);
  }
  return p;
}

// P(T = t) for t = 1..20 followed by P(T >= 21). After the come-out the game
// ends on each throw with probability (ways(point) + 6) / 36.
inline std::array<double, kCrapsThrowBins> CrapsThrowDistribution() {
  std::array<double, kCrapsThrowBins> dist{};
  dist[0] = 12.0 / 36.0;
  double tail = 0.0;
  for (int s = 4; s <= 10; ++s) {
    if (!IsPoint(s)) continue;
    const double start = kDiceSumWays[s] / 36.0;
    const double end = (kDiceSumWays[s] + 6.0) / 36.0;
    for (std::size_t t = 2; t < kCrapsThrowBins; ++t) {
      dist[t - 1] += start * std::pow(1.0 - end, static_cast<double>(t - 2)) * end;
    }
    tail += start * std::pow(1.0 - end, static_cast<double>(kCrapsThrowBins - 2));
  }
  dist[kCrapsThrowBins - 1] = tail;
  return dist;
}

struct CrapsSimulation {
  std::uint64_t games = 0;
  std::uint64_t wins = 0;
  std::uint64_t total_throws = 0;
  std::uint64_t words_consumed = 0;
  std::array<std::uint64_t, kCrapsThrowBins> throws_histogram{};
};

// floor(6 * word / 2^width) + 1
constexpr int DieFromWord(std::uint64_t word, Width width) {
  if (width == Width::k32) return static_cast<int>((word * 6) >> 32) + 1;
  return static_cast<int>((static_cast<unsigned __int128>(word) * 6) >> 64) + 1;
}

// Plays `games` games, one word per die. Returns nullopt if the words run out
// before the last game ends.
inline std::optional<CrapsSimulation> SimulateCraps(
    std::span<const std::uint64_t> words, Width width, std::uint64_t games) {
  CrapsSimulation sim;
  std::size_t pos = 0;
  auto roll = [&](int& sum) {
    if (pos + 2 > words.size()) return false;
    sum = DieFromWord(words[pos], width) + DieFromWord(words[pos + 1], width);
    pos += 2;
    return true;
  };
  for (std::uint64_t g = 0; g < games; ++g) {
    int sum = 0;
    if (!roll(sum)) return std::nullopt;
    std::uint64_t throws = 1;
    bool win;
    if (sum == 7 || sum == 11) {
      win = true;
    } else if (sum == 2 || sum == 3 || sum == 12) {
      win = false;
    } else {
      const int point = sum;
      for (;;) {
        if (!roll(sum)) return std::nullopt;
        ++throws;
        if (sum == point) {
          win = true;
          break;
        }
        if (sum == 7) {
          win = false;
          break;
        }
      }
    }
    sim.wins += win ? 1 : 0;
    sim.total_throws += throws;
    ++sim.throws_histogram[std::min<std::uint64_t>(throws, kCrapsThrowBins) - 1];
  }
  sim.games = games;
  sim.words_consumed = pos;
  return sim;
}

// Words to set aside for `games` games: the mean plus a margin of eight
// standard deviations, so running short is practically impossible.
inline std::uint64_t CrapsWordBound(std::uint64_t games) {
  constexpr double kMeanWords = 2.0 * 557.0 / 165.0;
  constexpr double kSdWords = 2.0 * 3.004;
  const double g = static_cast<double>(games);
  return static_cast<std::uint64_t>(
      std::ceil(g * kMeanWords * 1.01 + 8.0 * kSdWords * std::sqrt(g) + 64.0));
}

inline double CrapsWinZ(const CrapsSimulation& sim) {
  const double p = CrapsWinProbability();
  const double n = static_cast<double>(sim.games);
  return (static_cast<double>(sim.wins) - n * p) / std::sqrt(n * p * (1.0 - p));
}

inline TestResult Craps(std::span<const std::uint64_t> words, Width width,
                        const CrapsConfig& cfg) {
  const auto sim = SimulateCraps(words, width, cfg.games);
  if (!sim && words.size() >= CrapsWordBound(cfg.games)) {
    // Under the null this bound is never reached; the dice are broken.
    throw Error(ErrorCode::kDegenerateInput,
                "games ran past the word bound of " +
                    std::to_string(CrapsWordBound(cfg.games)) + " words");
  }
  if (!sim) {
    throw Error(ErrorCode::kStreamExhausted,
                "craps ran out of words before " + std::to_string(cfg.games) +
                    " games finished");
  }
  const double z = CrapsWinZ(*sim);
  const PValue p_wins = NormalTailTwoSided(z);
  const auto dist = CrapsThrowDistribution();
  const auto chi = ChiSquareMerged(sim->throws_histogram, dist);
  const PValue p_throws = Chi2Tail(chi.statistic, chi.dof);
  // Sidak combination of the two sub-tests; stays uniform under the null.
  const double p_min = std::min(p_wins.value(), p_throws.value());
  const PValue combined(-std::expm1(2.0 * std::log1p(-p_min)));
  char notes[160];
  std::snprintf(notes, sizeof notes,
                "games=%llu wins=%llu p_wins=%.6g throws_chi2=%.6g dof=%llu "
                "p_throws=%.6g",
                static_cast<unsigned long long>(sim->games),
                static_cast<unsigned long long>(sim->wins), p_wins.value(),
                chi.statistic, static_cast<unsigned long long>(chi.dof),
                p_throws.value());
  return TestResult::Completed("craps", sim->words_consumed, chi.statistic, z,
                               combined, notes);
}

// ---------------------------------------------------------------------------
// Planning

struct TestPlan {
  TestId id;
  TestConfig config;
  std::uint64_t words_per_rep = 0;  // segment length sliced off the stream
  bool runnable = true;
  std::string note;
};

// Smallest configurations a test will scale down to.
inline constexpr std::uint64_t kMonobitFloorBits = 64;
inline constexpr std::uint64_t kBirthdayFloorReps = 100;
inline constexpr std::uint64_t kPerm5FloorTuples = 600;
inline constexpr std::uint64_t kCrapsFloorGames = 1000;

inline std::uint64_t SegmentWords(TestId id, const TestConfig& cfg, Width width) {
  switch (id) {
    case TestId::kMonobit: return MonobitWords(cfg.monobit.bits, width);
    case TestId::kEquidist: return cfg.equidist.samples;
    case TestId::kBirthday: return cfg.birthday.m * cfg.birthday.reps;
    case TestId::kPerm5: return 5 * cfg.perm5.tuples;
    case TestId::kCraps: return CrapsWordBound(cfg.craps.games);
  }
  return 0;
}

namespace detail {

inline std::uint64_t ScaleCount(std::uint64_t full, double factor,
                                std::uint64_t floor) {
  const auto scaled = static_cast<std::uint64_t>(static_cast<double>(full) * factor);
  return std::min(full, std::max(floor, scaled));
}

inline TestConfig ScaleConfig(const TestConfig& cfg, double factor) {
  TestConfig out = cfg;
  out.monobit.bits = ScaleCount(cfg.monobit.bits, factor, kMonobitFloorBits);
  out.equidist.samples =
      ScaleCount(cfg.equidist.samples, factor, 5 * cfg.equidist.cells);
  out.birthday.reps = ScaleCount(cfg.birthday.reps, factor, kBirthdayFloorReps);
  out.perm5.tuples = ScaleCount(cfg.perm5.tuples, factor, kPerm5FloorTuples);
  out.craps.games = ScaleCount(cfg.craps.games, factor, kCrapsFloorGames);
  return out;
}

}  // namespace detail

inline std::uint64_t Repetitions(const TestConfig& cfg) {
  return std::max<std::uint64_t>(1, cfg.second_level_reps);
}

// Decides how many words each selected test gets. With enough budget every
// test keeps its configured size; otherwise a common scale factor is found
// by bisection so the segments fit.
inline std::vector<TestPlan> PlanBattery(std::span<const TestId> selection,
                                         const TestConfig& cfg, Width width,
                                         std::uint64_t budget_words) {
  cfg.Validate(width);
  std::vector<TestId> ordered;
  for (TestId id : kTestOrder) {
    if (std::find(selection.begin(), selection.end(), id) != selection.end()) {
      ordered.push_back(id);
    }
  }
  const std::uint64_t reps = Repetitions(cfg);
  auto total_words = [&](const TestConfig& c) {
    std::uint64_t sum = 0;
    for (TestId id : ordered) sum += SegmentWords(id, c, width) * reps;
    return sum;
  };

  std::vector<TestPlan> plans;
  if (total_words(cfg) <= budget_words) {
    for (TestId id : ordered) {
      plans.push_back({id, cfg, SegmentWords(id, cfg, width), true, {}});
    }
    return plans;
  }

  const TestConfig floors = detail::ScaleConfig(cfg, 0.0);
  if (total_words(floors) <= budget_words) {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 64; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (total_words(detail::ScaleConfig(cfg, mid)) <= budget_words) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const TestConfig scaled = detail::ScaleConfig(cfg, lo);
    char note[64];
    std::snprintf(note, sizeof note, "scaled to %.3g%% of default to fit budget",
                  100.0 * lo);
    for (TestId id : ordered) {
      const bool changed = SegmentWords(id, scaled, width) != SegmentWords(id, cfg, width);
      plans.push_back({id, scaled, SegmentWords(id, scaled, width), true,
                       changed ? note : ""});
    }
    return plans;
  }

  // Not even the floors fit: run what fits in order, at floor size.
  std::uint64_t left = budget_words;
  for (TestId id : ordered) {
    const std::uint64_t need = SegmentWords(id, floors, width) * reps;
    if (need <= left) {
      left -= need;
      plans.push_back({id, floors, SegmentWords(id, floors, width), true,
                       "scaled to minimum size to fit budget"});
    } else {
      plans.push_back({id, floors, SegmentWords(id, floors, width), false,
                       "budget below minimum of " + std::to_string(need) +
                           " words"});
    }
  }
  return plans;
}

// Runs one test on a segment. Errors that mean "this input cannot be tested"
// become results: exhaustion is not run, a degenerate input is a failure.
inline TestResult RunTestOnSegment(TestId id, std::span<const std::uint64_t> words,
                                   Width width, const TestConfig& cfg) {
  const std::string name(TestName(id));
  try {
    switch (id) {
      case TestId::kMonobit: return Monobit(words, width, cfg.monobit);
      case TestId::kEquidist: return Equidistribution(words, width, cfg.equidist);
      case TestId::kBirthday: return BirthdaySpacings(words, width, cfg.birthday);
      case TestId::kPerm5: return OverlappingPermutations(words, cfg.perm5);
      case TestId::kCraps: return Craps(words, width, cfg.craps);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerateInput) {
      return TestResult::Completed(name, words.size(),
                                   std::numeric_limits<double>::quiet_NaN(),
                                   std::numeric_limits<double>::quiet_NaN(),
                                   PValue(0.0), e.what());
    }
    if (e.code() == ErrorCode::kStreamExhausted) {
      return TestResult::NotRun(name, words.size(), e.what());
    }
    throw;
  }
  throw Error(ErrorCode::kInvalidParams, "unknown test");
}

inline std::string JoinNotes(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "; " + b;
}

// Runs the selected tests over consecutive segments of `stream`.
inline BatteryReport RunBattery(WordStream& stream, const TestConfig& cfg,
                                std::span<const TestId> selection) {
  if (selection.empty()) {
    throw Error(ErrorCode::kInvalidParams, "no tests selected");
  }
  const Width width = stream.width();
  const auto plans =
      PlanBattery(selection, cfg, width, stream.remaining_budget_words());
  const std::uint64_t reps = Repetitions(cfg);
  std::vector<TestResult> results;
  std::vector<std::uint64_t> segment;
  for (const TestPlan& plan : plans) {
    const std::string name(TestName(plan.id));
    std::vector<double> pvalues;
    bool all_ran = true;
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      const std::string rep_name =
          cfg.second_level_reps > 0 ? name + "[" + std::to_string(rep + 1) + "]"
                                    : name;
      if (!plan.runnable) {
        results.push_back(TestResult::NotRun(rep_name, 0, plan.note));
        all_ran = false;
        continue;
      }
      segment.resize(plan.words_per_rep);
      const std::size_t got = stream.NextWords(std::span(segment));
      TestResult r;
      if (got < plan.words_per_rep) {
        r = TestResult::NotRun(rep_name, got,
                               "stream exhausted: got " + std::to_string(got) +
                                   " of " + std::to_string(plan.words_per_rep) +
                                   " words");
      } else {
        r = RunTestOnSegment(plan.id, segment, width, plan.config);
        r.test_name = rep_name;
      }
      r.notes = JoinNotes(r.notes, plan.note);
      if (r.p && r.classification != Classification::kNotRun) {
        pvalues.push_back(r.p->value());
      } else {
        all_ran = false;
      }
      results.push_back(std::move(r));
    }
    if (cfg.second_level_reps > 0) {
      const std::string ks_name = name + ".ks";
      if (!all_ran) {
        results.push_back(TestResult::NotRun(
            ks_name, 0, "not every repetition produced a p-value"));
      } else {
        const KsResult ks = KsUniform(pvalues);
        results.push_back(TestResult::Completed(
            ks_name, 0, ks.statistic, static_cast<double>(pvalues.size()), ks.p,
            "KS uniformity of " + std::to_string(pvalues.size()) + " p-values"));
      }
    }
  }
  return MakeReport(std::move(results), stream.words_read(), stream.descriptor());
}

}  // namespace rngbattery

#endif  // RNGBATTERY_BATTERY_HPP_
