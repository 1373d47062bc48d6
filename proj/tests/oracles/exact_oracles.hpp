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

#ifndef RNGBATTERY_TESTS_ORACLES_EXACT_ORACLES_HPP_
#define RNGBATTERY_TESTS_ORACLES_EXACT_ORACLES_HPP_

// Independent oracles for the statistical kernels. They favour exactness
// (rational arithmetic, enumeration, quadrature) over speed and share no code
// with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

// Adaptive Simpson quadrature.
inline long double Integrate(const std::function<long double(long double)>& f,
                             long double a, long double b,
                             long double eps = 1e-15L, int depth = 50) {
  auto simpson = [&](long double lo, long double hi, long double flo,
                     long double fmid, long double fhi) {
    return (hi - lo) / 6 * (flo + 4 * fmid + fhi);
  };
  std::function<long double(long double, long double, long double, long double,
                            long double, long double, long double, int)>
      recurse = [&](long double lo, long double hi, long double flo,
                    long double fmid, long double fhi, long double whole,
                    long double tol, int d) -> long double {
    const long double mid = (lo + hi) / 2;
    const long double lmid = (lo + mid) / 2;
    const long double rmid = (mid + hi) / 2;
    const long double flm = f(lmid);
    const long double frm = f(rmid);
    const long double left = simpson(lo, mid, flo, flm, fmid);
    const long double right = simpson(mid, hi, fmid, frm, fhi);
    if (d <= 0 || std::fabs(left + right - whole) <= 15 * tol) {
      return left + right + (left + right - whole) / 15;
    }
    return recurse(lo, mid, flo, flm, fmid, left, tol / 2, d - 1) +
           recurse(mid, hi, fmid, frm, fhi, right, tol / 2, d - 1);
  };
  const long double fa = f(a);
  const long double fb = f(b);
  const long double fm = f((a + b) / 2);
  return recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), eps, depth);
}

// Exact P(D_n < d) for the two-sided Kolmogorov statistic, by integrating the
// uniform order-statistic density n! over the band
//   i/n - d < u_(i) < (i-1)/n + d
// one coordinate at a time. Each partial integral is a piecewise polynomial
// in the upper limit, kept in exact rational arithmetic.
inline Rational KolmogorovCdfExact(int n, const Rational& d) {
  const Rational zero = 0;
  const Rational one = 1;
  std::vector<Rational> lower(n + 1), upper(n + 1);
  std::vector<Rational> breaks{zero, one};
  for (int i = 1; i <= n; ++i) {
    lower[i] = std::max(zero, Rational(i) / n - d);
    upper[i] = std::min(one, Rational(i - 1) / n + d);
    if (lower[i] >= upper[i]) return zero;
    breaks.push_back(lower[i]);
    breaks.push_back(upper[i]);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const std::size_t pieces = breaks.size() - 1;

  // poly[k][j] is the coefficient of (x - breaks[k])^j on piece k.
  using Poly = std::vector<Rational>;
  std::vector<Poly> g(pieces, Poly{one});
  auto eval = [&](const Poly& p, const Rational& dx) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * dx + *it;
    return acc;
  };
  for (int i = 1; i <= n; ++i) {
    std::vector<Poly> next(pieces);
    Rational acc = 0;
    for (std::size_t k = 0; k < pieces; ++k) {
      const Rational& left = breaks[k];
      const Rational& right = breaks[k + 1];
      if (right <= lower[i]) {
        next[k] = Poly{zero};
      } else if (left >= upper[i]) {
        next[k] = Poly{acc};
      } else {
        Poly integral(g[k].size() + 1);
        integral[0] = acc;
        for (std::size_t j = 0; j < g[k].size(); ++j) {
          integral[j + 1] = g[k][j] / Rational(static_cast<long>(j + 1));
        }
        acc = eval(integral, right - left);
        next[k] = std::move(integral);
      }
    }
    g = std::move(next);
  }
  Rational factorial = 1;
  for (int i = 2; i <= n; ++i) factorial *= i;
  return factorial * eval(g.back(), breaks[pieces] - breaks[pieces - 1]);
}

inline double KolmogorovPValueExact(int n, double d) {
  const Rational cdf = KolmogorovCdfExact(n, Rational(d));
  return static_cast<double>(Rational(1) - cdf);
}

// Craps win probability by enumerating the 36 come-out rolls; a point p is
// made before a 7 with probability ways(p) / (ways(p) + 6).
inline Rational CrapsWinProbabilityExact() {
  Rational win = 0;
  for (int d1 = 1; d1 <= 6; ++d1) {
    for (int d2 = 1; d2 <= 6; ++d2) {
      const int sum = d1 + d2;
      if (sum == 7 || sum == 11) {
        win += Rational(1, 36);
      } else if (sum == 2 || sum == 3 || sum == 12) {
        continue;
      } else {
        int ways = 0;
        for (int a = 1; a <= 6; ++a) {
          for (int b = 1; b <= 6; ++b) ways += (a + b == sum) ? 1 : 0;
        }
        win += Rational(1, 36) * Rational(ways, ways + 6);
      }
    }
  }
  return win;
}

// Distribution of throws per game by pushing probability mass through the
// game one throw at a time over all 36 outcomes. Entry t-1 is P(T = t) for
// t < bins; the last entry is P(T >= bins).
inline std::vector<Rational> CrapsThrowDistributionExact(int bins) {
  std::vector<Rational> dist(bins, Rational(0));
  // mass[p] is the probability of still playing with point p after the
  // throws so far; index 0 is the come-out state.
  std::map<int, Rational> mass{{0, Rational(1)}};
  Rational ended = 0;
  for (int t = 1; t < bins; ++t) {
    std::map<int, Rational> next;
    Rational ends_now = 0;
    for (const auto& [point, m] : mass) {
      for (int d1 = 1; d1 <= 6; ++d1) {
        for (int d2 = 1; d2 <= 6; ++d2) {
          const int sum = d1 + d2;
          const Rational w = m / 36;
          bool over;
          if (point == 0) {
            over = sum == 7 || sum == 11 || sum == 2 || sum == 3 || sum == 12;
          } else {
            over = sum == point || sum == 7;
          }
          if (over) {
            ends_now += w;
          } else {
            next[point == 0 ? sum : point] += w;
          }
        }
      }
    }
    dist[t - 1] = ends_now;
    ended += ends_now;
    mass = std::move(next);
  }
  dist[bins - 1] = Rational(1) - ended;
  return dist;
}

// Birthday-spacings duplicate count via multiplicities: each spacing value
// seen c times contributes c - 1.
inline std::uint64_t SpacingDuplicatesByCounting(std::vector<std::uint64_t> b) {
  std::sort(b.begin(), b.end());
  std::map<std::uint64_t, std::uint64_t> seen;
  for (std::size_t i = 1; i < b.size(); ++i) ++seen[b[i] - b[i - 1]];
  std::uint64_t dups = 0;
  for (const auto& [value, count] : seen) dups += count - 1;
  return dups;
}

// e^-lambda lambda^k / k! in 50-digit binary floating point.
inline double PoissonPmfHighPrecision(unsigned k, double lambda) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  Big l = lambda;
  Big term = boost::multiprecision::exp(-l);
  for (unsigned i = 1; i <= k; ++i) term = term * l / i;
  return static_cast<double>(term);
}

}  // namespace oracle

#endif  // RNGBATTERY_TESTS_ORACLES_EXACT_ORACLES_HPP_
