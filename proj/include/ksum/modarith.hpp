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

// Integer and modular arithmetic kernel: factorization, inverses, Jacobi
// symbols, square roots modulo prime powers and CRT recombination.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ksum/errors.hpp"

namespace ksum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Reduces any signed integer into [0, m).
inline u64 reduce(i64 x, u64 m) {
  if (m == 1) return 0;
  const i128 r = static_cast<i128>(x) % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(m) : r);
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

inline u64 gcd3(u64 a, u64 b, u64 c) { return std::gcd(std::gcd(a, b), c); }

/// Deterministic Miller-Rabin, valid for every n < 2^64.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Sinclair's base set.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  u64 p = 0;
  int j = 0;

  u64 value() const {
    u64 v = 1;
    for (int i = 0; i < j; ++i) v *= p;
    return v;
  }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

namespace detail {

// Brent's cycle variant of Pollard rho with batched gcds. n must be an odd
// composite that is not a perfect power of a small prime.
inline u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
    const u64 batch = 128;
    u64 r = 1;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += batch;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

inline constexpr u64 kTrialLimit = 1000000;

}  // namespace detail

/// A positive integer q < 2^63 together with its prime-power factorization,
/// primes strictly increasing.
class FactoredModulus {
 public:
  FactoredModulus() = default;

  /// Builds from a known factorization; validates every invariant.
  FactoredModulus(u64 q, std::vector<PrimePower> factors) : q_(q), factors_(std::move(factors)) {
    u128 product = 1;
    u64 last = 0;
    for (const auto& f : factors_) {
      if (f.j < 1 || f.p <= last || !ksum::is_prime(f.p)) throw BadInput("malformed factorization");
      last = f.p;
      product *= f.value();
    }
    if (q_ == 0 || product != q_) throw BadInput("factor product does not match modulus");
  }

  u64 value() const { return q_; }
  operator u64() const { return q_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

  bool is_prime() const { return factors_.size() == 1 && factors_[0].j == 1; }
  bool is_odd() const { return q_ % 2 == 1; }
  bool is_prime_power() const { return factors_.size() == 1; }

  /// Euler's totient.
  u64 phi() const {
    u64 r = q_;
    for (const auto& f : factors_) r = r / f.p * (f.p - 1);
    return r;
  }

  int mobius() const {
    for (const auto& f : factors_)
      if (f.j > 1) return 0;
    return factors_.size() % 2 == 0 ? 1 : -1;
  }

  u64 divisor_count() const {
    u64 r = 1;
    for (const auto& f : factors_) r *= static_cast<u64>(f.j + 1);
    return r;
  }

  /// All positive divisors, ascending.
  std::vector<u64> divisors() const {
    std::vector<u64> ds{1};
    for (const auto& f : factors_) {
      const std::size_t n = ds.size();
      u64 pk = 1;
      for (int k = 1; k <= f.j; ++k) {
        pk *= f.p;
        for (std::size_t i = 0; i < n; ++i) ds.push_back(ds[i] * pk);
      }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
  }

  /// Squarefree divisors with their Mobius value.
  std::vector<std::pair<u64, int>> squarefree_divisors() const {
    std::vector<std::pair<u64, int>> ds{{1, 1}};
    for (const auto& f : factors_) {
      const std::size_t n = ds.size();
      for (std::size_t i = 0; i < n; ++i) ds.emplace_back(ds[i].first * f.p, -ds[i].second);
    }
    return ds;
  }

  friend bool operator==(const FactoredModulus& a, const FactoredModulus& b) {
    return a.q_ == b.q_ && a.factors_ == b.factors_;
  }

 private:
  u64 q_ = 1;
  std::vector<PrimePower> factors_;
};

/// Complete factorization of 1 <= n < 2^63: trial division by small primes,
/// then Pollard-Brent rho on the cofactor.
inline FactoredModulus factorize(u64 n) {
  if (n == 0 || n >= (u64{1} << 63)) throw BadInput("factorize expects 1 <= n < 2^63");
  std::vector<u64> primes;
  u64 m = n;
  for (u64 p = 2; p < detail::kTrialLimit && p * p <= m; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
  }
  if (m > 1) detail::factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> factors;
  for (u64 p : primes) {
    if (!factors.empty() && factors.back().p == p) {
      ++factors.back().j;
    } else {
      factors.push_back({p, 1});
    }
  }
  return FactoredModulus(n, std::move(factors));
}

/// Inverse of x modulo m via the extended Euclidean algorithm.
inline u64 mod_inv(i64 x, u64 m) {
  if (m == 1) return 0;
  i128 a = reduce(x, m), b = m, s0 = 1, s1 = 0;
  while (b != 0) {
    const i128 t = a / b;
    a -= t * b;
    std::swap(a, b);
    s0 -= t * s1;
    std::swap(s0, s1);
  }
  if (a != 1) throw NotInvertible(std::to_string(x) + " mod " + std::to_string(m));
  return static_cast<u64>(s0 < 0 ? s0 + m : s0);
}

/// Jacobi symbol (a/n) for odd n >= 1.
inline int jacobi(i64 a_in, u64 n) {
  if (n % 2 == 0) throw EvenModulus("jacobi symbol needs odd n, got " + std::to_string(n));
  u64 a = reduce(a_in, n);
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const u64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

/// Tonelli-Shanks square root modulo an odd prime; nullopt for non-residues.
inline std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (jacobi(static_cast<i64>(a), p) != 1) return std::nullopt;
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  u64 z = 2;
  while (jacobi(static_cast<i64>(z), p) != -1) ++z;
  u64 c = pow_mod(z, q, p);
  u64 x = pow_mod(a, (q + 1) / 2, p);
  u64 t = pow_mod(a, q, p);
  int m = s;
  while (t != 1) {
    int i = 0;
    u64 tt = t;
    while (tt != 1) {
      tt = mul_mod(tt, tt, p);
      ++i;
    }
    u64 b = c;
    for (int k = 0; k < m - i - 1; ++k) b = mul_mod(b, b, p);
    x = mul_mod(x, b, p);
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    m = i;
  }
  return x;
}

/// Some l with l^2 = a (mod p^j) for odd p and p not dividing a, found by a
/// Tonelli-Shanks root mod p lifted with Hensel steps. Of the two roots the
/// smaller is returned; nullopt when a is a non-residue mod p.
inline std::optional<u64> sqrt_mod_prime_power(i64 a_in, u64 p, int j) {
  if (p % 2 == 0) throw EvenModulus("sqrt_mod_prime_power needs an odd prime");
  if (j < 1) throw BadInput("exponent must be >= 1");
  u64 pj = 1;
  for (int i = 0; i < j; ++i) pj *= p;
  const u64 a = reduce(a_in, pj);
  if (a % p == 0) throw BadInput("p divides a; strip common factors first");
  auto root = sqrt_mod_prime(a % p, p);
  if (!root) return std::nullopt;
  u64 l = *root;
  u64 pk = p;
  for (int k = 1; k < j; ++k) {
    pk *= p;
    // l <- l - (l^2 - a) / (2l)  (mod p^{k+1})
    const u64 ak = a % pk;
    const u64 l2 = mul_mod(l, l, pk);
    const u64 diff = (l2 + pk - ak) % pk;
    const u64 inv2l = mod_inv(static_cast<i64>(mul_mod(2, l, pk)), pk);
    l = (l + pk - mul_mod(diff, inv2l, pk)) % pk;
  }
  return std::min(l, pj - l);
}

/// The unique x mod m1*m2 with x = r1 (mod m1) and x = r2 (mod m2).
inline u64 crt_pair(i64 r1, u64 m1, i64 r2, u64 m2) {
  if (gcd(m1, m2) != 1) throw NonCoprime(std::to_string(m1) + " and " + std::to_string(m2));
  const u64 a = reduce(r1, m1), b = reduce(r2, m2);
  const u64 m = m1 * m2;
  // x = a + m1 * ((b - a) * m1^{-1} mod m2)
  const u64 inv = mod_inv(static_cast<i64>(m1 % m2), m2);
  const u64 diff = (b + m2 - a % m2) % m2;
  const u64 t = mul_mod(diff, inv, m2);
  return (a + static_cast<u64>(static_cast<u128>(m1) * t % m)) % m;
}

/// Smallest generator of (Z/pZ)^*, p an odd prime (or 2).
inline u64 primitive_root(u64 p) {
  if (!is_prime(p)) throw BadInput("primitive_root needs a prime");
  if (p == 2) return 1;
  const auto f = factorize(p - 1);
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (const auto& pp : f.factors())
      if (pow_mod(g, (p - 1) / pp.p, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

}  // namespace ksum
