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

#ifndef RNGBATTERY_TESTS_ORACLES_REFERENCE_GENERATORS_HPP_
#define RNGBATTERY_TESTS_ORACLES_REFERENCE_GENERATORS_HPP_

// Test-only reference generators, written in the style of the original C
// sources and sharing no code with the library engines.

#include <cstdint>

namespace oracle {

// Straight port of mt19937ar.c (init_genrand + genrand_int32).
class Mt19937Reference {
 public:
  explicit Mt19937Reference(std::uint32_t s) {
    mt_[0] = s;
    for (mti_ = 1; mti_ < kN; mti_++) {
      mt_[mti_] = (1812433253UL * (mt_[mti_ - 1] ^ (mt_[mti_ - 1] >> 30)) + mti_);
      mt_[mti_] &= 0xffffffffUL;
    }
  }

  std::uint32_t GenrandInt32() {
    unsigned long y;
    static const unsigned long mag01[2] = {0x0UL, kMatrixA};
    if (mti_ >= kN) {
      int kk;
      for (kk = 0; kk < kN - kM; kk++) {
        y = (mt_[kk] & kUpperMask) | (mt_[kk + 1] & kLowerMask);
        mt_[kk] = mt_[kk + kM] ^ (y >> 1) ^ mag01[y & 0x1UL];
      }
      for (; kk < kN - 1; kk++) {
        y = (mt_[kk] & kUpperMask) | (mt_[kk + 1] & kLowerMask);
        mt_[kk] = mt_[kk + (kM - kN)] ^ (y >> 1) ^ mag01[y & 0x1UL];
      }
      y = (mt_[kN - 1] & kUpperMask) | (mt_[0] & kLowerMask);
      mt_[kN - 1] = mt_[kM - 1] ^ (y >> 1) ^ mag01[y & 0x1UL];
      mti_ = 0;
    }
    y = mt_[mti_++];
    y ^= (y >> 11);
    y ^= (y << 7) & 0x9d2c5680UL;
    y ^= (y << 15) & 0xefc60000UL;
    y ^= (y >> 18);
    return static_cast<std::uint32_t>(y & 0xffffffffUL);
  }

 private:
  static constexpr int kN = 624;
  static constexpr int kM = 397;
  static constexpr unsigned long kMatrixA = 0x9908b0dfUL;
  static constexpr unsigned long kUpperMask = 0x80000000UL;
  static constexpr unsigned long kLowerMask = 0x7fffffffUL;
  unsigned long mt_[kN];
  int mti_;
};

// xorshift64* stepped one operation at a time.
inline std::uint64_t XorshiftStarStep(std::uint64_t& x) {
  const std::uint64_t a = x ^ (x >> 12);
  const std::uint64_t b = a ^ (a << 25);
  const std::uint64_t c = b ^ (b >> 27);
  x = c;
  return c * 2685821657736338717ULL;
}

// pcg32_srandom_r / pcg32_random_r from pcg-c-basic.
struct Pcg32Reference {
  std::uint64_t state;
  std::uint64_t inc;

  Pcg32Reference(std::uint64_t initstate, std::uint64_t initseq) {
    state = 0U;
    inc = (initseq << 1u) | 1u;
    Next();
    state += initstate;
    Next();
  }

  std::uint32_t Next() {
    std::uint64_t oldstate = state;
    state = oldstate * 6364136223846793005ULL + inc;
    std::uint32_t xorshifted = static_cast<std::uint32_t>(((oldstate >> 18u) ^ oldstate) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(oldstate >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31));
  }
};

// Inverse of the MT19937 tempering transform.
inline std::uint32_t Untemper(std::uint32_t y) {
  y ^= y >> 18;
  y ^= (y << 15) & 0xefc60000u;
  // y ^= (y << 7) & b needs repeated application to recover all bits.
  std::uint32_t t = y;
  for (int i = 0; i < 5; ++i) t = y ^ ((t << 7) & 0x9d2c5680u);
  y = t;
  t = y;
  for (int i = 0; i < 3; ++i) t = y ^ (t >> 11);
  return t;
}

}  // namespace oracle

#endif  // RNGBATTERY_TESTS_ORACLES_REFERENCE_GENERATORS_HPP_
