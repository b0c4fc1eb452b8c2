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

#include <random>

#include "ksum/expsums.hpp"

namespace ksum {
namespace {

constexpr double kTight = 1e-9;

TEST(Kloosterman, Examples) {
  EXPECT_NEAR(kloosterman_brute(0, 0, factorize(12)).real(), 4, kTight);
  EXPECT_NEAR(kloosterman_brute(1, 1, factorize(5)).real(), 2 + 2 * std::cos(4 * std::numbers::pi / 5), kTight);
  EXPECT_NEAR(kloosterman_fast(1, 1, factorize(49)).real(), kloosterman_brute(1, 1, factorize(49)).real(), kTight);
  for (u64 q : {9ull, 27ull, 125ull, 343ull}) {
    const u64 p = factorize(q).factors()[0].p;
    EXPECT_NEAR(kloosterman_fast(static_cast<i64>(3 * p), 1, factorize(q)).abs(), 0, kTight);
  }
}

TEST(Kloosterman, ReducesToRamanujan) {
  EXPECT_EQ(ramanujan(0, factorize(36)), 12);
  EXPECT_EQ(ramanujan(4, factorize(6)), -1);
  for (u64 q = 1; q <= 200; ++q) {
    const auto fq = factorize(q);
    for (i64 m = -5; m < static_cast<i64>(q); m += 3) {
      const i64 c = ramanujan(m, fq);
      EXPECT_NEAR(kloosterman_brute(m, 0, fq).real(), static_cast<double>(c), 1e-9 * static_cast<double>(q));
      const u64 g = std::gcd(reduce(m, q), q);
      EXPECT_LE(static_cast<u64>(std::llabs(c)), g == 0 ? q : g);
    }
  }
}

TEST(Kloosterman, FastMatchesBruteOnEveryPairForSmallModuli) {
  for (u64 q = 1; q <= 130; ++q) {
    const auto fq = factorize(q);
    const UnitTable t(q);
    const KloostermanFast kf(fq);
    for (u64 m = 0; m < q; ++m)
      for (u64 n = 0; n < q; ++n) {
        const auto f = kf(static_cast<i64>(m), static_cast<i64>(n));
        const auto b = kloosterman_brute(static_cast<i64>(m), static_cast<i64>(n), t);
        ASSERT_NEAR(std::abs(f.value - b.value), 0, 1e-9 * static_cast<double>(q)) << q << " " << m << " " << n;
        ASSERT_LE(std::abs(b.value.imag()), 1e-6 * std::max<double>(1, static_cast<double>(b.terms)));
      }
  }
}

TEST(Kloosterman, PullOutAndUnequalGcds) {
  // d K_{q/d}(m*, n*) for q = p^j and d = gcd(m, n, q) < q
  const auto q = factorize(625);
  for (i64 ms : {1, 2, 7, 24})
    for (i64 ns : {1, 3, 11})
      for (i64 d : {5, 25}) {
        const double want = static_cast<double>(d) * kloosterman_brute(ms, ns, factorize(625 / d)).real();
        EXPECT_NEAR(kloosterman_fast(ms * d, ns * d, q).real(), want, 1e-9);
      }
  EXPECT_NEAR(kloosterman_fast(5, 1, q).real(), 0, 1e-9);
  EXPECT_NEAR(kloosterman_fast(25, 5, q).real(), 0, 1e-9);
}

TEST(Kloosterman, ClosedFormIsRootInvariant) {
  for (u64 q : {9ull, 25ull, 27ull, 49ull, 121ull, 125ull, 2187ull}) {
    const auto f = factorize(q).factors()[0];
    for (u64 l = 1; l < q; ++l) {
      if (l % f.p == 0) continue;
      const double a = kloosterman_closed_form(2, f.p, f.j, l), b = kloosterman_closed_form(2, f.p, f.j, q - l);
      EXPECT_NEAR(a, b, 1e-10 * std::sqrt(static_cast<double>(q)));
      const u64 m = mul_mod(mul_mod(l, l, q), 2, q);
      EXPECT_NEAR(a, kloosterman_brute(static_cast<i64>(m), 2, factorize(q)).real(), 1e-9);
    }
  }
}

TEST(Kloosterman, WeilBound) {
  EXPECT_DOUBLE_EQ(weil_bound_rhs(0, 0, factorize(36)), 9.0 * 36.0);
  EXPECT_DOUBLE_EQ(weil_bound_rhs(1, 1, factorize(101)), 2.0 * std::sqrt(101.0));
  std::mt19937_64 rng(1);
  for (u64 q = 2; q <= 2000; q += 7) {
    const auto fq = factorize(q);
    for (int k = 0; k < 5; ++k) {
      const i64 m = static_cast<i64>(rng() % q), n = static_cast<i64>(rng() % q);
      EXPECT_LE(kloosterman_fast(m, n, fq).abs(), weil_bound_rhs(m, n, fq) * (1 + 1e-12));
    }
  }
}

TEST(Salie, Examples) {
  EXPECT_THROW(salie(1, 1, factorize(10)), EvenModulus);
  EXPECT_NEAR(salie(0, 0, factorize(15)).abs(), 0, kTight);
  cplx want{};
  for (i64 x = 1; x < 5; ++x) want += static_cast<double>(jacobi(x, 5)) * e_q(x + static_cast<i64>(mod_inv(x, 5)), 5);
  EXPECT_NEAR(std::abs(salie(1, 1, factorize(5)).value - want), 0, kTight);
  cplx w9{};
  for (i64 x = 1; x < 9; ++x)
    if (x % 3) w9 += static_cast<double>(jacobi(x, 9)) * e_q(2 * x + 4 * static_cast<i64>(mod_inv(x, 9)), 9);
  EXPECT_NEAR(std::abs(salie(2, 4, factorize(9)).value - w9), 0, kTight);
}

TEST(Gauss, Examples) {
  EXPECT_NEAR(gauss(1, 0, 5).real(), std::sqrt(5.0), kTight);
  // d = gcd(m, q) not dividing n forces zero
  EXPECT_NEAR(gauss(3, 1, 9).abs(), 0, kTight);
  EXPECT_NEAR(gauss(4, 2, 12).abs(), 0, kTight);
}

TEST(Gauss, StarMatchesMobiusExpansion) {
  for (u64 q = 1; q <= 300; ++q) {
    const auto fq = factorize(q);
    for (i64 m = 0; m < static_cast<i64>(q); m += 1 + static_cast<i64>(q) / 9)
      for (i64 n = 0; n < static_cast<i64>(q); n += 1 + static_cast<i64>(q) / 7)
        ASSERT_NEAR(std::abs(gauss_star(m, n, q).value - gauss_star_mobius(m, n, fq).value), 0,
                    1e-8 * static_cast<double>(q));
  }
}

TEST(TTransform, Examples) {
  EXPECT_NEAR(t_transform_brute(1, 1, 0, factorize(5)).real(), 4, kTight);
  for (u64 q : {5ull, 12ull, 49ull, 60ull, 97ull})
    for (i64 x : {0, 1, 3})
      for (i64 y : {0, 2, 5})
        EXPECT_NEAR(t_transform_fast(x, y, 0, factorize(q)).real(), static_cast<double>(ramanujan(x - y, factorize(q))),
                    1e-9);
}

TEST(TTransform, PrimeIdentity) {
  const u64 p = 31;
  const auto fp = factorize(p);
  for (i64 x = 0; x < 31; x += 4)
    for (i64 y = 1; y < 31; y += 5)
      for (i64 z = 1; z < 31; z += 6) {
        const i64 zi = static_cast<i64>(mod_inv(z, p));
        const cplx want = kloosterman_brute(x * zi, y * zi, fp).value * e_q((x + y) * zi, p) - 1.0;
        EXPECT_NEAR(std::abs(t_transform_fast(x, y, z, fp).value - want), 0, 1e-9);
      }
}

TEST(TTransform, FastMatchesBrute) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const u64 q = 1 + rng() % 300;
    const auto fq = factorize(q);
    const i64 x = static_cast<i64>(rng() % q), y = static_cast<i64>(rng() % q), z = static_cast<i64>(rng() % q);
    EXPECT_NEAR(std::abs(t_transform_fast(x, y, z, fq).value - t_transform_brute(x, y, z, fq).value), 0,
                1e-6 * std::pow(static_cast<double>(q), 1.5));
  }
}

TEST(TTransform, SplitsOverCoprimeFactors) {
  // T(x, y, z; 6) = T(x/3, y/3, z; 2) T(x/2, y/2, z; 3), inverses taken mod 2 and mod 3
  const auto q = factorize(6);
  for (i64 x = 0; x < 6; ++x)
    for (i64 y = 0; y < 6; ++y)
      for (i64 z = 0; z < 6; ++z) {
        const i64 i3 = static_cast<i64>(mod_inv(3, 2)), i2 = static_cast<i64>(mod_inv(2, 3));
        const cplx want = t_transform_brute(x * i3, y * i3, z, factorize(2)).value *
                          t_transform_brute(x * i2, y * i2, z, factorize(3)).value;
        EXPECT_NEAR(std::abs(t_transform_brute(x, y, z, q).value - want), 0, 1e-9) << x << y << z;
      }
}

}  // namespace
}  // namespace ksum
