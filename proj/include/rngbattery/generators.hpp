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

#ifndef RNGBATTERY_GENERATORS_HPP_
#define RNGBATTERY_GENERATORS_HPP_

// Reference generators used both as test subjects and as sources for the
// `emit` subcommand.
//
// Every engine is deterministic given its seed and models
// std::uniform_random_bit_generator at its native width. `Generator` wraps
// them behind a runtime algorithm id and produces words of either width:
//
//   * a 32-bit native engine asked for a 64-bit word draws twice and packs
//     the earlier draw into the low half;
//   * a 64-bit native engine asked for a 32-bit word keeps the high half.
//
// LCG outputs are never rescaled. A modulus below 2^32 leaves the top bits of
// every word zero (minstd and RANDU never set bit 31). This is deliberate: the
// defects of weak generators must reach the battery intact.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rngbattery/errors.hpp"

namespace rngbattery {

enum class Width { k32, k64 };

constexpr unsigned WordBits(Width w) { return w == Width::k32 ? 32 : 64; }
constexpr std::size_t WordBytes(Width w) { return w == Width::k32 ? 4 : 8; }
constexpr std::string_view WidthName(Width w) {
  return w == Width::k32 ? "w32" : "w64";
}

enum class Algorithm { kLcg, kMt19937, kXorshift64Star, kPcg32 };

struct LcgParams {
  std::uint64_t multiplier = 16807;
  std::uint64_t increment = 0;
  std::uint64_t modulus = 2147483647;  // 2^31 - 1

  friend bool operator==(const LcgParams&, const LcgParams&) = default;
};

inline constexpr LcgParams kMinstd{16807, 0, 2147483647};
inline constexpr LcgParams kRandu{65539, 0, std::uint64_t{1} << 31};

// x' = (a*x + c) mod m, evaluated in 128 bits so any m < 2^64 is exact.
class Lcg {
 public:
  using result_type = std::uint64_t;

  Lcg(const LcgParams& params, std::uint64_t seed) : params_(params) {
    if (params.modulus <= 1 || params.multiplier >= params.modulus ||
        params.increment >= params.modulus) {
      throw Error(ErrorCode::kInvalidParams,
                  "LCG requires m > 1, 0 <= a < m, 0 <= c < m");
    }
    state_ = seed % params.modulus;
    if (state_ == 0 && params.increment == 0) {
      throw Error(ErrorCode::kDegenerateSeed,
                  "LCG seed reduces to 0 with c = 0 (fixed point)");
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const unsigned __int128 next =
        static_cast<unsigned __int128>(params_.multiplier) * state_ +
        params_.increment;
    state_ = static_cast<std::uint64_t>(next % params_.modulus);
    return state_;
  }

  const LcgParams& params() const { return params_; }
  std::uint64_t state() const { return state_; }
  bool native_64() const { return params_.modulus > (std::uint64_t{1} << 32); }

 private:
  LcgParams params_;
  std::uint64_t state_;
};

// MT19937 (w=32, n=624, m=397) with the reference init_genrand seeding.
// Seeds wider than 32 bits go through init_by_array({low, high}) so that
// distinct 64-bit seeds give distinct streams.
class Mt19937 {
 public:
  using result_type = std::uint32_t;
  static constexpr std::size_t kStateSize = 624;
  static constexpr std::size_t kShift = 397;

  explicit Mt19937(std::uint64_t seed = 5489) {
    if (seed >> 32 == 0) {
      InitGenrand(static_cast<std::uint32_t>(seed));
    } else {
      const std::array<std::uint32_t, 2> key{
          static_cast<std::uint32_t>(seed),
          static_cast<std::uint32_t>(seed >> 32)};
      InitByArray(key);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()() {
    if (index_ >= kStateSize) Twist();
    return Temper(state_[index_++]);
  }

  static constexpr std::uint32_t Temper(std::uint32_t y) {
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= y >> 18;
    return y;
  }

  std::size_t index() const { return index_; }
  const std::array<std::uint32_t, kStateSize>& state() const { return state_; }

 private:
  void InitGenrand(std::uint32_t s) {
    state_[0] = s;
    for (std::size_t i = 1; i < kStateSize; ++i) {
      state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) +
                  static_cast<std::uint32_t>(i);
    }
    index_ = kStateSize;
  }

  void InitByArray(std::span<const std::uint32_t> key) {
    InitGenrand(19650218u);
    std::size_t i = 1;
    std::size_t j = 0;
    for (std::size_t k = std::max(kStateSize, key.size()); k > 0; --k) {
      state_[i] = (state_[i] ^ ((state_[i - 1] ^ (state_[i - 1] >> 30)) *
                                1664525u)) +
                  key[j] + static_cast<std::uint32_t>(j);
      ++i;
      ++j;
      if (i >= kStateSize) {
        state_[0] = state_[kStateSize - 1];
        i = 1;
      }
      if (j >= key.size()) j = 0;
    }
    for (std::size_t k = kStateSize - 1; k > 0; --k) {
      state_[i] = (state_[i] ^ ((state_[i - 1] ^ (state_[i - 1] >> 30)) *
                                1566083941u)) -
                  static_cast<std::uint32_t>(i);
      ++i;
      if (i >= kStateSize) {
        state_[0] = state_[kStateSize - 1];
        i = 1;
      }
    }
    state_[0] = 0x80000000u;
    index_ = kStateSize;
  }

  void Twist() {
    constexpr std::uint32_t kUpper = 0x80000000u;
    constexpr std::uint32_t kLower = 0x7fffffffu;
    constexpr std::uint32_t kMatrixA = 0x9908b0dfu;
    for (std::size_t i = 0; i < kStateSize; ++i) {
      const std::uint32_t y =
          (state_[i] & kUpper) | (state_[(i + 1) % kStateSize] & kLower);
      state_[i] = state_[(i + kShift) % kStateSize] ^ (y >> 1) ^
                  ((y & 1u) ? kMatrixA : 0u);
    }
    index_ = 0;
  }

  std::array<std::uint32_t, kStateSize> state_{};
  std::size_t index_ = kStateSize;
};

// xorshift64*: shifts (12, 25, 27) then multiply by 2685821657736338717.
class Xorshift64Star {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kMultiplier = 2685821657736338717ull;

  explicit Xorshift64Star(std::uint64_t seed) : state_(seed) {
    if (seed == 0) {
      throw Error(ErrorCode::kDegenerateSeed,
                  "xorshift64* seed 0 is the all-zero fixed point");
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * kMultiplier;
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// PCG32 (XSH-RR on a 64-bit LCG state). The user seed is the initial state;
// the stream selector is fixed at kStream.
class Pcg32 {
 public:
  using result_type = std::uint32_t;
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ull;
  static constexpr std::uint64_t kStream = 54;

  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = kStream)
      : state_(0), increment_((stream << 1) | 1u) {
    Step();
    state_ += seed;
    Step();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()() {
    const std::uint64_t old = state_;
    Step();
    const auto xorshifted =
        static_cast<std::uint32_t>(((old >> 18) ^ old) >> 27);
    const auto rot = static_cast<unsigned>(old >> 59);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t state() const { return state_; }
  std::uint64_t increment() const { return increment_; }

 private:
  void Step() { state_ = state_ * kMultiplier + increment_; }

  std::uint64_t state_;
  std::uint64_t increment_;
};

// Named generators accepted on the command line.
struct GeneratorPreset {
  std::string_view id;
  Algorithm algorithm;
  std::optional<LcgParams> lcg;
  std::string_view description;
};

inline constexpr std::array<GeneratorPreset, 6> kGeneratorPresets{{
    {"mt19937", Algorithm::kMt19937, std::nullopt,
     "Mersenne Twister MT19937, 32-bit native"},
    {"minstd", Algorithm::kLcg, kMinstd,
     "Lehmer LCG a=16807 c=0 m=2^31-1, 31-bit values"},
    {"randu", Algorithm::kLcg, kRandu,
     "RANDU LCG a=65539 c=0 m=2^31, known-bad specimen"},
    {"xorshift64star", Algorithm::kXorshift64Star, std::nullopt,
     "xorshift64* (12,25,27), 64-bit native"},
    {"pcg32", Algorithm::kPcg32, std::nullopt,
     "PCG32 XSH-RR, stream 54, 32-bit native"},
    {"lcg", Algorithm::kLcg, kMinstd,
     "LCG with user constants (defaults to minstd)"},
}};

inline const GeneratorPreset* FindGeneratorPreset(std::string_view id) {
  for (const auto& preset : kGeneratorPresets) {
    if (preset.id == id) return &preset;
  }
  return nullptr;
}

class Generator {
 public:
  static Generator Create(Algorithm algorithm, std::uint64_t seed,
                          std::optional<LcgParams> lcg = std::nullopt) {
    switch (algorithm) {
      case Algorithm::kLcg:
        return Generator(algorithm, seed, Lcg(lcg.value_or(kMinstd), seed));
      case Algorithm::kMt19937:
        return Generator(algorithm, seed, Mt19937(seed));
      case Algorithm::kXorshift64Star:
        return Generator(algorithm, seed, Xorshift64Star(seed));
      case Algorithm::kPcg32:
        return Generator(algorithm, seed, Pcg32(seed));
    }
    throw Error(ErrorCode::kInvalidParams, "unknown algorithm");
  }

  static Generator FromPreset(const GeneratorPreset& preset,
                              std::uint64_t seed,
                              std::optional<LcgParams> lcg = std::nullopt) {
    return Create(preset.algorithm, seed, lcg ? lcg : preset.lcg);
  }

  Algorithm algorithm() const { return algorithm_; }
  std::uint64_t seed() const { return seed_; }

  Width native_width() const {
    return std::visit(
        [](const auto& engine) {
          using Engine = std::decay_t<decltype(engine)>;
          if constexpr (std::is_same_v<Engine, Lcg>) {
            return engine.native_64() ? Width::k64 : Width::k32;
          } else {
            return sizeof(typename Engine::result_type) == 8 ? Width::k64
                                                             : Width::k32;
          }
        },
        engine_);
  }

  std::uint64_t NextWord(Width width) {
    std::uint64_t word;
    Fill(std::span<std::uint64_t>(&word, 1), width);
    return word;
  }

  // Writes out.size() successive words; one dispatch for the whole span.
  void Fill(std::span<std::uint64_t> out, Width width) {
    std::visit(
        [&](auto& engine) {
          const bool native64 = native_width() == Width::k64;
          for (auto& word : out) {
            if (width == Width::k64) {
              if (native64) {
                word = static_cast<std::uint64_t>(engine());
              } else {
                const std::uint64_t low = engine() & 0xffffffffu;
                const std::uint64_t high = engine() & 0xffffffffu;
                word = low | (high << 32);
              }
            } else {
              const std::uint64_t raw = engine();
              word = native64 ? raw >> 32 : raw;
            }
          }
        },
        engine_);
  }

  template <typename Engine>
  const Engine* engine_if() const {
    return std::get_if<Engine>(&engine_);
  }

 private:
  using Engines = std::variant<Lcg, Mt19937, Xorshift64Star, Pcg32>;

  Generator(Algorithm algorithm, std::uint64_t seed, Engines engine)
      : algorithm_(algorithm), seed_(seed), engine_(std::move(engine)) {}

  Algorithm algorithm_;
  std::uint64_t seed_;
  Engines engine_;
};

inline void StoreLittleEndian(std::uint64_t word, Width width,
                              std::byte* out) {
  for (std::size_t i = 0; i < WordBytes(width); ++i) {
    out[i] = static_cast<std::byte>((word >> (8 * i)) & 0xffu);
  }
}

// Writes exactly byte_budget bytes of little-endian words to `sink`, which is
// called with successive chunks and returns false when it can accept no more
// (closed pipe, full disk). Returns the number of bytes written.
template <typename Sink>
std::uint64_t EmitStream(Generator& gen, Width width,
                         std::uint64_t byte_budget, Sink&& sink) {
  const std::size_t word_bytes = WordBytes(width);
  if (byte_budget % word_bytes != 0) {
    throw Error(ErrorCode::kInvalidParams,
                "byte budget must be a multiple of the word size");
  }
  constexpr std::size_t kChunkWords = 8192;
  std::vector<std::uint64_t> words(kChunkWords);
  std::vector<std::byte> bytes(kChunkWords * 8);
  std::uint64_t written = 0;
  while (written < byte_budget) {
    const std::size_t n = static_cast<std::size_t>(
        std::min<std::uint64_t>(kChunkWords, (byte_budget - written) / word_bytes));
    gen.Fill(std::span(words.data(), n), width);
    for (std::size_t i = 0; i < n; ++i) {
      StoreLittleEndian(words[i], width, bytes.data() + i * word_bytes);
    }
    const std::span<const std::byte> chunk(bytes.data(), n * word_bytes);
    if (!sink(chunk)) {
      throw Error(ErrorCode::kSinkError,
                  "sink rejected output after " + std::to_string(written) +
                      " bytes");
    }
    written += chunk.size();
  }
  return written;
}

}  // namespace rngbattery

#endif  // RNGBATTERY_GENERATORS_HPP_
