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


#include <gtest/gtest.h>

#include "ksum/divisor.hpp"

namespace ksum {
namespace {

TEST(Tau, Sieve) {
  const auto tau = tau_sieve(100);
  EXPECT_EQ(tau[1], 1);
  EXPECT_EQ(tau[12], 6);
  u64 s = 0;
  for (u64 n = 1; n <= 100; ++n) s += tau[n];
  EXPECT_EQ(s, 482u);
  EXPECT_THROW(tau_sieve(static_cast<u64>(kSieveCap) + 1), TooLarge);
}

TEST(ArithmeticProgressions, DirectFilter) {
  const auto tau = tau_sieve(1000);
  u64 want = 0;
  for (u64 n = 1; n <= 100; ++n)
    if (n % 3 == 1) want += tau[n];
  EXPECT_EQ(divisor_sum_ap(tau, 100, 1, factorize(3)), want);
  EXPECT_THROW(divisor_sum_ap(tau, 100, 6, factorize(9)), NonCoprime);
}

TEST(ArithmeticProgressions, PartitionIdentity) {
  const u64 X = 100000;
  const auto tau = tau_sieve(X);
  u64 total = 0;
  for (u64 n = 1; n <= X; ++n) total += tau[n];
  for (u64 q : {101ull, 2141ull, 360ull}) {
    const auto fq = factorize(q);
    u64 units = 0, rest = 0;
    const auto cls = class_sums(tau, X, q);
    for (u64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) == 1)
        units += divisor_sum_ap(tau, X, static_cast<i64>(a), fq);
      else
        rest += cls[a];
    }
    EXPECT_EQ(units + rest, total);
  }
}

TEST(MainTerm, Values) {
  const double X = 1e5;
  EXPECT_NEAR(main_term(100000, factorize(1)), X * (std::log(X) + 2 * kEulerGamma - 1), 1e-6);
  // the average over units sits at the main term scale
  const auto tau = tau_sieve(100000);
  const auto q = factorize(101);
  double avg = 0;
  for (i64 a = 1; a < 101; ++a) avg += static_cast<double>(divisor_sum_ap(tau, 100000, a, q));
  avg /= 100;
  EXPECT_NEAR(avg / main_term(100000, q), 1.0, 0.01);
}

TEST(FamilyError, MatchesSumOfPointwiseErrors) {
  const auto tau = tau_sieve(50000);
  const auto q = factorize(210);
  const Interval I{10, 40};
  double want = 0;
  for (i64 a = 11; a <= 50; ++a)
    if (std::gcd(static_cast<u64>(a), 210ull) == 1) want += error_term(tau, 50000, a, q);
  EXPECT_NEAR(family_error(tau, 50000, I, q), want, 1e-6);
  // the only element, 2, is not a unit mod 6
  EXPECT_EQ(family_error(tau, 50000, Interval{1, 1}, factorize(6)), 0.0);
}

TEST(FamilyBound, PreconditionsAndShape) {
  EXPECT_EQ(thm33_precondition(100, 50, 101), "X >= q");
  EXPECT_EQ(thm33_precondition(100000, 2141, 2141), "A < q");
  EXPECT_EQ(thm33_precondition(100000, 2, 2141), "q^3 < A X^2/8");
  EXPECT_FALSE(thm33_precondition(100000, 32, 2141).has_value());
  EXPECT_THROW(thm33_rhs(100000, 2, 2141, 0.05, 1.0), OutOfRange);
  // large X picks the first branch of the minimum
  const u64 q = 101, A = 100, X = q * q * q;
  const double x = static_cast<double>(X);
  EXPECT_NEAR(family_error_shape(X, A, q), std::sqrt(101.0) * std::pow(x, 0.25) + std::sqrt(x), 1e-6);
}

}  // namespace
}  // namespace ksum
