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

// Divisor sums over arithmetic progressions, their expected main term and
// error terms, single and summed over a family of residues.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksum/errors.hpp"
#include "ksum/interval.hpp"
#include "ksum/modarith.hpp"

namespace ksum {

inline constexpr double kEulerGamma = 0.577215664901532860607;
inline constexpr u64 kSieveCap = 100'000'000;

/// tau(n) for 0 <= n <= X (tau(0) is left as 0).
inline std::vector<std::uint16_t> tau_sieve(u64 X) {
  if (X > kSieveCap) throw TooLarge("tau_sieve is capped at 10^8");
  std::vector<std::uint16_t> t(X + 1, 0);
  for (u64 d = 1; d <= X; ++d)
    for (u64 n = d; n <= X; n += d) ++t[n];
  return t;
}

/// Sums of tau over each residue class mod q, for n <= X.
inline std::vector<u64> class_sums(const std::vector<std::uint16_t>& tau, u64 X, u64 q) {
  if (X >= tau.size()) throw BadInput("sieve is shorter than X");
  std::vector<u64> s(q, 0);
  u64 r = 1 % q;
  for (u64 n = 1; n <= X; ++n) {
    s[r] += tau[n];
    if (++r == q) r = 0;
  }
  return s;
}

/// S(X; a, q) = sum_{n <= X, n = a mod q} tau(n).
inline u64 divisor_sum_ap(const std::vector<std::uint16_t>& tau, u64 X, i64 a, const FactoredModulus& q) {
  const u64 Q = q.value(), ar = reduce(a, Q);
  if (gcd(ar, Q) != 1 && Q > 1) throw NonCoprime("a must be coprime to q");
  if (X >= tau.size()) throw BadInput("sieve is shorter than X");
  u64 s = 0;
  for (u64 n = ar == 0 ? Q : ar; n <= X; n += Q) s += tau[n];
  return s;
}

/// (phi(q)/q^2) X (log X + 2 gamma - 1) - (2/q) X sum_{d | q} mu(d) log(d) / d
inline double main_term(u64 X, const FactoredModulus& q) {
  const double x = static_cast<double>(X), Q = static_cast<double>(q.value());
  double s = 0;
  for (auto [d, mu] : q.squarefree_divisors())
    if (d > 1) s += mu * std::log(static_cast<double>(d)) / static_cast<double>(d);
  return static_cast<double>(q.phi()) / (Q * Q) * x * (std::log(x) + 2.0 * kEulerGamma - 1.0) - 2.0 / Q * x * s;
}

inline double error_term(const std::vector<std::uint16_t>& tau, u64 X, i64 a, const FactoredModulus& q) {
  return static_cast<double>(divisor_sum_ap(tau, X, a, q)) - main_term(X, q);
}

/// Units of Z_q in the interval I.
inline std::vector<u64> family_residues(const Interval& I, u64 q) {
  std::vector<u64> out;
  for (i64 i = 0; i < I.length; ++i) {
    const u64 a = reduce(I.at(i), q);
    if (q == 1 || gcd(a, q) == 1) out.push_back(a);
  }
  return out;
}

/// sum over a in I (units only) of R(X; a, q).
inline double family_error(const std::vector<std::uint16_t>& tau, u64 X, const Interval& I, const FactoredModulus& q) {
  if (static_cast<u64>(I.length) >= q.value() && q.value() > 1) throw BadInput("the family interval must be shorter than q");
  const auto cls = class_sums(tau, X, q.value());
  const auto fam = family_residues(I, q.value());
  const double m = main_term(X, q);
  double s = 0;
  for (u64 a : fam) s += static_cast<double>(cls[a]) - m;
  return s;
}

inline std::optional<std::string> thm33_precondition(u64 X, u64 A, u64 q) {
  if (X < q) return "X >= q";
  if (A >= q) return "A < q";
  const double Q = static_cast<double>(q), a = static_cast<double>(A), x = static_cast<double>(X);
  if (!(Q * Q * Q < a * x * x / 8.0)) return "q^3 < A X^2/8";
  return std::nullopt;
}

/// min{q^{1/2} X^{1/4} + X^{1/2}, X^{1/2}(A^{1/4} + A q^{-1/2}), X^{1/2}(1 + A q^{-1/4})}
inline double family_error_shape(u64 X, u64 A, u64 q) {
  const double x = static_cast<double>(X), a = static_cast<double>(A), Q = static_cast<double>(q);
  const double rx = std::sqrt(x);
  const double e1 = std::sqrt(Q) * std::pow(x, 0.25) + rx;
  const double e2 = rx * (std::pow(a, 0.25) + a / std::sqrt(Q));
  const double e3 = rx * (1.0 + a * std::pow(Q, -0.25));
  return std::min({e1, e2, e3});
}

/// C (E + A^{2/3} X^{1/3}) X^eps
inline double thm33_rhs(u64 X, u64 A, u64 q, double epsilon, double constant) {
  if (auto bad = thm33_precondition(X, A, q)) throw OutOfRange(*bad);
  const double x = static_cast<double>(X), a = static_cast<double>(A);
  return constant * (family_error_shape(X, A, q) + std::pow(a, 2.0 / 3.0) * std::cbrt(x)) * std::pow(x, epsilon);
}

/// X^{0.99} / q, the pointwise scale below the classical level q <= X^{2/3}.
inline double selberg_hooley_rhs(u64 X, u64 q) {
  return std::pow(static_cast<double>(X), 0.99) / static_cast<double>(q);
}

}  // namespace ksum
