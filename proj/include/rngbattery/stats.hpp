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

#ifndef RNGBATTERY_STATS_HPP_
#define RNGBATTERY_STATS_HPP_

// Distribution tails used to turn test statistics into p-values. Everything
// here is a pure function of its arguments.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rngbattery/errors.hpp"

namespace rngbattery {

class PValue {
 public:
  constexpr PValue() = default;

  // Rounding can push a computed probability slightly outside [0, 1]; that
  // is clamped. Anything further out is a bug in the caller.
  explicit PValue(double raw) {
    assert(!std::isnan(raw));
    assert(raw >= -1e-12 && raw <= 1.0 + 1e-12);
    value_ = std::clamp(raw, 0.0, 1.0);
  }

  constexpr double value() const { return value_; }

  friend bool operator==(PValue, PValue) = default;

 private:
  double value_ = 1.0;
};

namespace detail {

constexpr int kMaxGammaIterations = 100000;
constexpr double kGammaEpsilon = 1e-16;

// Lower regularized incomplete gamma P(a, x) by its power series; use for
// x < a + 1.
inline double GammaSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxGammaIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kGammaEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by the Legendre continued
// fraction (modified Lentz); use for x >= a + 1.
inline double GammaContinuedFraction(double a, double x) {
  constexpr double kTiny = std::numeric_limits<double>::min() / kGammaEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kGammaEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Q(a, x) = Gamma(a, x) / Gamma(a).
inline double RegularizedGammaQ(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "incomplete gamma needs a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - detail::GammaSeries(a, x);
  return detail::GammaContinuedFraction(a, x);
}

// P(a, x) = 1 - Q(a, x), computed on the accurate side of the split.
inline double RegularizedGammaP(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "incomplete gamma needs a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return detail::GammaSeries(a, x);
  return 1.0 - detail::GammaContinuedFraction(a, x);
}

// Upper tail P(X >= statistic) of the chi-squared distribution.
inline PValue Chi2Tail(double statistic, std::uint64_t dof) {
  if (dof == 0) throw Error(ErrorCode::kDomainError, "chi2 dof must be >= 1");
  if (std::isnan(statistic) || statistic < 0.0) {
    throw Error(ErrorCode::kDomainError, "chi2 statistic must be >= 0");
  }
  return PValue(RegularizedGammaQ(0.5 * static_cast<double>(dof),
                                  0.5 * statistic));
}

inline PValue NormalTailTwoSided(double z) {
  if (std::isnan(z)) throw Error(ErrorCode::kDomainError, "z is NaN");
  return PValue(std::erfc(std::fabs(z) / std::numbers::sqrt2));
}

namespace detail {

// stirlerr(n) = log(n!) - log(sqrt(2 pi n) (n/e)^n), after Loader (2000).
inline double StirlingError(double n) {
  constexpr double kS0 = 1.0 / 12.0;
  constexpr double kS1 = 1.0 / 360.0;
  constexpr double kS2 = 1.0 / 1260.0;
  constexpr double kS3 = 1.0 / 1680.0;
  constexpr double kS4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
           0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500) return (kS0 - kS1 / nn) / n;
  if (n > 80) return (kS0 - (kS1 - kS2 / nn) / nn) / n;
  if (n > 35) return (kS0 - (kS1 - (kS2 - kS3 / nn) / nn) / nn) / n;
  return (kS0 - (kS1 - (kS2 - (kS3 - kS4 / nn) / nn) / nn) / nn) / n;
}

// bd0(x, np) = x log(x/np) + np - x, without cancellation near x = np.
inline double DevianceTerm(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace detail

// e^-lambda lambda^k / k!, via the saddle-point form so the relative error
// stays near machine precision for large k.
inline double PoissonPmf(std::uint64_t k, double lambda) {
  if (!(lambda > 0.0) || std::isinf(lambda)) {
    throw Error(ErrorCode::kDomainError, "poisson lambda must be finite and > 0");
  }
  if (k > 1000000) throw Error(ErrorCode::kDomainError, "poisson k > 10^6");
  if (k == 0) return std::exp(-lambda);
  const double x = static_cast<double>(k);
  return std::exp(-detail::StirlingError(x) -
                  detail::DevianceTerm(x, lambda)) /
         std::sqrt(2.0 * std::numbers::pi * x);
}

// P(X >= k) for X ~ Poisson(lambda).
inline double PoissonUpperTail(std::uint64_t k, double lambda) {
  if (k == 0) return 1.0;
  return RegularizedGammaP(static_cast<double>(k), lambda);
}

namespace detail {

// Asymptotic Kolmogorov survival function Q_KS(t) = P(K > t).
inline double KolmogorovSurvival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.18) {
    // Small-t form; the alternating series converges too slowly here.
    const double w = std::log(t);
    const double f = -std::numbers::pi * std::numbers::pi / (8.0 * t * t);
    double sum = 0.0;
    for (int j = 1; j < 50; j += 2) sum += std::exp(j * j * f);
    return 1.0 - std::exp(std::log(std::sqrt(2.0 * std::numbers::pi)) - w) * sum;
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j < 100; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return 2.0 * sum;
}

// Exact P(D_n < d) by the Durbin matrix method as organized by Marsaglia,
// Tsang and Wang (2003), with exponent tracking to avoid underflow.
inline double KolmogorovCdfExact(int n, double d) {
  if (d <= 0.0) return 0.0;
  if (d >= 1.0) return 1.0;
  const int k = static_cast<int>(n * d) + 1;
  const int m = 2 * k - 1;
  const double h = k - n * d;
  using Matrix = std::vector<double>;
  auto at = [m](Matrix& a, int i, int j) -> double& { return a[i * m + j]; };

  Matrix hm(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) at(hm, i, j) = (i - j + 1 < 0) ? 0.0 : 1.0;
  }
  for (int i = 0; i < m; ++i) {
    at(hm, i, 0) -= std::pow(h, i + 1);
    at(hm, m - 1, i) -= std::pow(h, m - i);
  }
  if (2 * h - 1 > 0) at(hm, m - 1, 0) += std::pow(2 * h - 1, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i - j + 1 > 0) {
        for (int g = 1; g <= i - j + 1; ++g) at(hm, i, j) /= g;
      }
    }
  }

  auto multiply = [&](const Matrix& a, const Matrix& b) {
    Matrix c(a.size(), 0.0);
    for (int i = 0; i < m; ++i) {
      for (int l = 0; l < m; ++l) {
        const double ail = a[i * m + l];
        if (ail == 0.0) continue;
        for (int j = 0; j < m; ++j) c[i * m + j] += ail * b[l * m + j];
      }
    }
    return c;
  };

  // Square-and-multiply with a base-10 exponent carried alongside.
  struct Scaled {
    Matrix v;
    int exponent;
  };
  auto power = [&](auto&& self, const Matrix& a, int e) -> Scaled {
    if (e == 1) return {a, 0};
    Scaled half = self(self, a, e / 2);
    Scaled result{multiply(half.v, half.v), 2 * half.exponent};
    if (e % 2 == 1) result.v = multiply(a, result.v);
    if (result.v[(m / 2) * m + m / 2] > 1e140) {
      for (double& x : result.v) x *= 1e-140;
      result.exponent += 140;
    }
    return result;
  };
  Scaled q = power(power, hm, n);
  double s = q.v[(k - 1) * m + (k - 1)];
  int exponent = q.exponent;
  for (int i = 1; i <= n; ++i) {
    s = s * i / n;
    if (s < 1e-140) {
      s *= 1e140;
      exponent -= 140;
    }
  }
  return s * std::pow(10.0, exponent);
}

}  // namespace detail

struct KsResult {
  double statistic;
  PValue p;
};

// Sample sizes up to this use the exact finite-n distribution; larger ones
// use the asymptotic form with the (sqrt(n) + 0.12 + 0.11/sqrt(n)) scaling.
inline constexpr std::size_t kKsExactLimit = 100;

// Two-sided one-sample Kolmogorov-Smirnov test against Uniform(0, 1).
inline KsResult KsUniform(std::span<const double> samples) {
  if (samples.size() < 5) {
    throw Error(ErrorCode::kTooFewSamples,
                "KS test needs at least 5 samples, got " +
                    std::to_string(samples.size()));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double x : sorted) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error(ErrorCode::kDomainError, "KS sample outside [0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double above = (i + 1) / n - sorted[i];
    const double below = sorted[i] - i / n;
    d = std::max({d, above, below});
  }
  double p;
  if (sorted.size() <= kKsExactLimit) {
    p = 1.0 - detail::KolmogorovCdfExact(static_cast<int>(sorted.size()), d);
  } else {
    const double rn = std::sqrt(n);
    p = detail::KolmogorovSurvival((rn + 0.12 + 0.11 / rn) * d);
  }
  return {d, PValue(std::clamp(p, 0.0, 1.0))};
}

// Pearson statistic sum (o - e)^2 / e. Cells with e == 0 must have o == 0.
inline double ChiSquareStatistic(std::span<const double> observed,
                                 std::span<const double> expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      if (observed[i] != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    const double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

}  // namespace rngbattery

#endif  // RNGBATTERY_STATS_HPP_
