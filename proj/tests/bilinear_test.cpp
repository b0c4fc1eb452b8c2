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

#include "ksum/bilinear.hpp"

namespace ksum {
namespace {

std::vector<cplx> signs(std::size_t n, std::mt19937_64& rng) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = (rng() & 1) ? 1.0 : -1.0;
  return v;
}

double tol(u64 q) { return 1e-6 * std::pow(static_cast<double>(q), 1.5); }

TEST(Type2, Examples) {
  const auto q = factorize(101);
  const auto zero = WeightVector::on_interval({3, 5}, std::vector<cplx>(5, 0.0));
  const auto one = WeightVector::on_interval({8, 3}, std::vector<cplx>(3, 1.0));
  EXPECT_LT(type2_sum(zero, one, 7, q).abs(), 1e-12);
  const auto a1 = WeightVector::on_interval({4, 1}, {1.0}), b1 = WeightVector::on_interval({9, 1}, {1.0});
  EXPECT_NEAR(type2_sum(a1, b1, 3, q, Path::Dft).real(), kloosterman_brute(5, 30, q).real(), 1e-9);
  EXPECT_NEAR(type2_sum(a1, b1, 3, q, Path::Direct).real(), kloosterman_brute(5, 30, q).real(), 1e-9);
}

TEST(Type2, PathsAgree) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 60; ++i) {
    const u64 Q = 2 + rng() % 400;
    const auto q = factorize(Q);
    const u64 M = 1 + rng() % std::min<u64>(Q, 30), N = 1 + rng() % std::min<u64>(Q, 30);
    const auto al = WeightVector::on_interval({static_cast<i64>(rng() % 1000) - 500, static_cast<i64>(M)}, signs(M, rng));
    const auto be = WeightVector::on_interval({static_cast<i64>(rng() % 1000), static_cast<i64>(N)}, signs(N, rng));
    const i64 a = static_cast<i64>(rng() % Q);
    EXPECT_LT(std::abs(type2_sum(al, be, a, q, Path::Dft).value - type2_sum(al, be, a, q, Path::Direct).value), tol(Q));
  }
}

TEST(Type1, PathsAgreeAndFullPeriod) {
  std::mt19937_64 rng(2);
  for (u64 Q : {97ull, 120ull, 243ull, 360ull}) {
    const auto q = factorize(Q);
    const auto al = WeightVector::on_interval({5, 20}, signs(20, rng));
    for (i64 a : {1, 2, 6, 0}) {
      for (const Interval J : {Interval{7, 15}, Interval{0, static_cast<i64>(Q)}})
        EXPECT_LT(std::abs(type1_sum(al, J, a, q, Path::Dft).value - type1_sum(al, J, a, q, Path::Direct).value), tol(Q));
    }
  }
}

TEST(Type1, TriangleCeilingForSingleM) {
  const auto q = factorize(211);
  const auto al = WeightVector::on_interval({16, 1}, {1.0});
  const Interval J{0, 40};
  EXPECT_LE(type1_sum(al, J, 3, q).abs(), 40 * weil_bound_rhs(17, 3, q));
}

TEST(ProductSum, MatchesDirectIncludingNonUnitM) {
  std::mt19937_64 rng(3);
  for (u64 Q : {60ull, 64ull, 97ull, 225ull, 420ull}) {
    const auto q = factorize(Q);
    for (int t = 0; t < 4; ++t) {
      const u64 M = 1 + rng() % Q, N = 1 + rng() % 40;
      const auto al = WeightVector::on_interval({static_cast<i64>(rng() % Q), static_cast<i64>(M)}, signs(M, rng));
      const Interval J{static_cast<i64>(rng() % Q), static_cast<i64>(N)};
      i64 a = static_cast<i64>(rng() % Q);
      while (std::gcd(static_cast<u64>(a), Q) != 1) a = (a + 1) % static_cast<i64>(Q);
      EXPECT_LT(std::abs(cor22_sum(al, J, a, q, Path::Dft).value - cor22_sum(al, J, a, q, Path::Direct).value), tol(Q));
    }
  }
}

TEST(WSum, AdmissibleSetAndPaths) {
  // q=60, r=6, c=5, K=2
  const auto ks = admissible_units(60, 6, 5, 2);
  std::vector<u64> want;
  for (u64 k = 1; k < 60; ++k)
    if (std::gcd(k, 60ull) == 1) {
      const u64 v = (5 * k) % 6;
      if ((v == 0 ? 6 : v) <= 2) want.push_back(k);
    }
  EXPECT_EQ(ks, want);
  std::mt19937_64 rng(4);
  for (u64 Q : {60ull, 97ull, 128ull}) {
    const auto q = factorize(Q);
    std::vector<cplx> gamma(Q);
    for (auto& g : gamma) g = (rng() & 1) ? 1.0 : -1.0;
    const auto al = WeightVector::on_interval({3, 17}, signs(17, rng));
    for (u64 r : q.divisors()) {
      i64 c = static_cast<i64>(rng() % r);
      while (std::gcd(static_cast<u64>(c), r) != 1 && r > 1) c = (c + 1) % static_cast<i64>(r);
      const u64 K = 1 + rng() % r;
      const auto d = w_sum(al, gamma, r, c, K, 7, q, Path::Direct), f = w_sum(al, gamma, r, c, K, 7, q, Path::Dft);
      EXPECT_LT(std::abs(d.value - f.value), tol(Q));
      EXPECT_LE(d.abs(), w_trivial_ceiling(al, gamma, admissible_units(Q, r, c, K).size()) * (1 + 1e-9));
    }
  }
  // gamma = 1, alpha = 1, M = 1: a single incomplete character sum
  std::vector<cplx> ones(13, 1.0);
  const auto single = WeightVector::on_interval({1, 1}, {1.0});
  cplx want1{};
  for (u64 k = 1; k <= 5; ++k) want1 += e_q(static_cast<i64>(2 * mod_inv(static_cast<i64>(k), 13)), 13);
  EXPECT_LT(std::abs(w_sum(single, ones, 13, 1, 5, 1, factorize(13)).value - want1), 1e-12);
}

TEST(SharpSums, PathsAgree) {
  std::mt19937_64 rng(5);
  const u64 p = 211;
  std::vector<i64> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(static_cast<i64>(rng() % p));
  const auto al = WeightVector::on_points(pts, signs(30, rng));
  const auto ga = WeightVector::on_interval({10, 40}, signs(40, rng));
  EXPECT_LT(std::abs(wsharp_sum(al, ga, 3, p, Path::Dft).value - wsharp_sum(al, ga, 3, p, Path::Direct).value), tol(p));
  const Interval J{20, 50};
  EXPECT_LT(std::abs(ssharp_sum(al, J, p, Path::Dft).value - ssharp_sum(al, J, p, Path::Direct).value), tol(p));
  EXPECT_THROW(wsharp_sum(al, WeightVector::on_interval({-3, 5}, signs(5, rng)), 3, p), ZeroInSupport);
  // interval support reduces to the Type I sum with a = 1
  const auto iv = WeightVector::on_interval({4, 25}, signs(25, rng));
  EXPECT_LT(std::abs(ssharp_sum(iv, J, p).value - type1_sum(iv, J, 1, factorize(p)).value), tol(p));
}

TEST(SumValues, ScaleLinearly) {
  std::mt19937_64 rng(6);
  const auto q = factorize(143);
  const auto al = WeightVector::on_interval({0, 12}, signs(12, rng));
  const auto be = WeightVector::on_interval({5, 9}, signs(9, rng));
  const cplx c{0.3, -1.7};
  EXPECT_LT(std::abs(type2_sum(al.scaled(c), be, 2, q).value - c * type2_sum(al, be, 2, q).value), 1e-9);
}

TEST(Bounds, DeltaShapes) {
  const double q = 1e4, M = 100, N = 100;
  const double a = delta1(M, N, q, 1, Variant::A);
  EXPECT_NEAR(a, std::pow(M, -0.25) + 0.2, 1e-12);
  // the full right side at M = N = q^{1/2} is q^{11/8}
  BoundParams b;
  b.q = q, b.M = M, b.N = N, b.alpha_l2 = std::sqrt(M);
  const double rhs = bound_rhs({Theorem::TypeI, Variant::A, 0.0, 1.0}, b);
  EXPECT_GT(rhs / std::pow(q, 11.0 / 8.0), 0.5);
  EXPECT_LT(rhs / std::pow(q, 11.0 / 8.0), 5.0);
  // long alpha, short interval: the third variant beats the first
  const double Q = 1e6, M6 = std::pow(Q, 0.6), N3 = std::pow(Q, 0.3);
  EXPECT_LT(delta1(M6, N3, Q, 1, Variant::C), delta1(M6, N3, Q, 1, Variant::A));
  EXPECT_NEAR(delta2(10, 1e4, 1e4, 1e4, Variant::A) - std::pow(10.0, -0.25) - std::pow(10.0, -0.5), 1e-2, 1e-12);
}

TEST(Bounds, PreconditionsAreNamed) {
  BoundParams b;
  b.q = 1009, b.M = 10, b.K = 5, b.r = 2;
  try {
    bound_rhs({Theorem::WSharp1, Variant::A, 0.05, 1.0}, b);
    FAIL();
  } catch (const OutOfRange& e) {
    EXPECT_EQ(e.precondition(), "K >= p^(1/r)");
  }
  b.K = 40, b.N = 100;
  EXPECT_EQ(bound_precondition({Theorem::SSharp1, Variant::A, 0.05, 1.0}, b), "N <= p^(1-1/r)");
  EXPECT_EQ(bound_precondition({Theorem::Trivial, Variant::A, 0.3, 1.0}, b), "0 <= epsilon <= 0.25");
  EXPECT_EQ(bound_precondition({Theorem::Trivial, Variant::A, 0.05, 0.0}, b), "constant > 0");
  BoundParams t;
  t.q = 5, t.M = 1, t.N = 1;
  EXPECT_NEAR(bound_rhs({Theorem::Trivial, Variant::A, 0.05, 1.0}, t), std::pow(5.0, 0.55), 1e-12);
}

}  // namespace
}  // namespace ksum
