// Copyright 2026 The ksum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Short Kloosterman averages m(l) = sum_{n in J} K_p(l, n) for all l at once,
// and their moments sum_l |m(l)|^{2 alpha}.

#include <cmath>
#include <string>
#include <vector>

#include "ksum/bilinear.hpp"
#include "ksum/errors.hpp"
#include "ksum/expsums.hpp"
#include "ksum/interval.hpp"

namespace ksum {

struct MomentProfile {
  u64 p = 2;
  Interval J;
  std::vector<cplx> values;     // m(l) for l = 0..p-1
  std::vector<double> magnitudes;  // |m(l)| for l = 1..p-1, index l-1

  double at_zero() const { return std::abs(values[0]); }
};

inline MomentProfile make_profile(u64 p, const Interval& J, std::vector<cplx> values) {
  MomentProfile prof;
  prof.p = p;
  prof.J = J;
  prof.values = std::move(values);
  prof.magnitudes.reserve(p - 1);
  for (u64 l = 1; l < p; ++l) prof.magnitudes.push_back(std::abs(prof.values[l]));
  return prof;
}

/// One length-p transform of x -> sum_{n in J} e_p(n x^{-1}).
inline MomentProfile m_profile(u64 p, const Interval& J) {
  if (!is_prime(p)) throw BadInput("moment profiles need a prime modulus");
  if (J.length < 1 || static_cast<u64>(J.length) > p) throw BadInput("need 1 <= N <= p");
  return make_profile(p, J, short_kloosterman_profile(p, J));
}

/// Per-l direct evaluation, O(p^2 N).
inline MomentProfile m_profile_direct(u64 p, const Interval& J) {
  if (!is_prime(p)) throw BadInput("moment profiles need a prime modulus");
  const UnitTable t(p);
  std::vector<cplx> v(p);
  for (u64 l = 0; l < p; ++l)
    for (i64 j = 0; j < J.length; ++j) v[l] += kloosterman_brute(static_cast<i64>(l), J.at(j), t).value;
  return make_profile(p, J, std::move(v));
}

/// sum over l in F_p^* of |m(l)|^{2 alpha}, compensated summation.
inline double moment(const MomentProfile& prof, double alpha) {
  if (alpha < 1) throw BadInput("alpha must be >= 1");
  double sum = 0, comp = 0;
  for (double m : prof.magnitudes) {
    if (m < 1e-12) continue;
    const double x = std::exp(2.0 * alpha * std::log(m));
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

/// sum over all l in F_p of |m(l)|^2, from the profile.
inline double full_second_moment(const MomentProfile& prof) {
  double s = 0;
  for (const auto& v : prof.values) s += std::norm(v);
  return s;
}

/// The same quantity by orthogonality: p (p N - N^2), exact for N <= p.
inline double full_second_moment_exact(u64 p, u64 N) {
  const double P = static_cast<double>(p), n = static_cast<double>(N);
  return P * (P * n - n * n);
}

inline double max_moment_alpha(int r) { return 12.0 * r / 7.0; }

inline std::optional<std::string> thm32_precondition(u64 p, u64 N, int r, double alpha) {
  if (r < 1) return "r >= 1";
  if (!(alpha >= 1.0 && alpha <= max_moment_alpha(r) * (1 + 1e-12))) return "1 <= alpha <= 12r/7";
  if (static_cast<double>(N) > std::pow(static_cast<double>(p), 1.0 - 1.0 / r) * (1 + 1e-12)) return "N <= p^(1-1/r)";
  return std::nullopt;
}

/// C p^{2 alpha + eps} N^{(12r - 7 alpha)/(12r - 7)} (1 + N^2 / p^{1-1/r})^{7(alpha - 1)/(12r - 7)}
inline double thm32_rhs(u64 p, u64 N, int r, double alpha, double epsilon, double constant) {
  if (auto bad = thm32_precondition(p, N, r, alpha)) throw OutOfRange(*bad);
  const double P = static_cast<double>(p), n = static_cast<double>(N), R = r, den = 12.0 * R - 7.0;
  return constant * std::pow(P, 2.0 * alpha + epsilon) * std::pow(n, (12.0 * R - 7.0 * alpha) / den) *
         std::pow(1.0 + n * n / std::pow(P, 1.0 - 1.0 / R), 7.0 * (alpha - 1.0) / den);
}

/// Right side of the interpolation M_alpha <= M_1^{a1} M_b^{a2/b}, b = 12r/7,
/// with a1 + a2 = alpha and a1 + a2/b = 1.
inline double holder_rhs(const MomentProfile& prof, int r, double alpha) {
  const double b = max_moment_alpha(r);
  const double a2 = (alpha - 1.0) / (1.0 - 1.0 / b);
  const double a1 = alpha - a2;
  const double m1 = moment(prof, 1.0), mb = moment(prof, b);
  if (m1 == 0 || mb == 0) return 0;
  return std::exp(a1 * std::log(m1) + (a2 / b) * std::log(mb));
}

}  // namespace ksum
