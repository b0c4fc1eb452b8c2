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

// Complete exponential sums modulo q: Kloosterman, Ramanujan, Salie,
// quadratic Gauss sums and the transform T(x, y, z; q), each with a direct
// oracle and, where one exists, a fast multiplicative/closed-form route.

#include <cmath>
#include <complex>
#include <memory>
#include <string_view>
#include <vector>

#include "ksum/dft.hpp"
#include "ksum/errors.hpp"
#include "ksum/modarith.hpp"

namespace ksum {

enum class Method { Brute, ClosedForm, CRT, Reduced };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Brute: return "brute";
    case Method::ClosedForm: return "closed-form";
    case Method::CRT: return "crt";
    case Method::Reduced: return "reduced";
  }
  return "?";
}

/// A complex result tagged with how it was obtained and how many elementary
/// summands went into it (the error budget scales with `terms`).
struct SumValue {
  cplx value{};
  Method method = Method::Brute;
  u64 terms = 0;

  double real() const { return value.real(); }
  double abs() const { return std::abs(value); }
};

/// Inverses and roots of unity modulo a fixed q, for O(q) direct sums.
class UnitTable {
 public:
  explicit UnitTable(u64 q) : q_(q), inv_(q, 0), root_(q) {
    if (q == 0) throw BadInput("modulus must be >= 1");
    for (u64 k = 0; k < q; ++k) root_[k] = unit_root(static_cast<i64>(k), q);
    if (q == 1) {
      units_.push_back(0);
      return;
    }
    for (u64 x = 1; x < q; ++x) {
      if (gcd(x, q) != 1 || inv_[x] != 0) continue;
      const u64 y = mod_inv(static_cast<i64>(x), q);
      inv_[x] = y;
      inv_[y] = x;
    }
    for (u64 x = 1; x < q; ++x)
      if (inv_[x] != 0) units_.push_back(x);
  }

  u64 modulus() const { return q_; }
  const std::vector<u64>& units() const { return units_; }
  u64 inv(u64 x) const { return inv_[x]; }
  const cplx& root(u64 k) const { return root_[k]; }

 private:
  u64 q_;
  std::vector<u64> inv_;
  std::vector<cplx> root_;
  std::vector<u64> units_;
};

/// Direct summation over the units of Z_q.
inline SumValue kloosterman_brute(i64 m, i64 n, const UnitTable& t) {
  const u64 q = t.modulus();
  const u64 mr = reduce(m, q), nr = reduce(n, q);
  cplx s{};
  for (u64 x : t.units()) s += t.root((mr * x % q + nr * t.inv(x) % q) % q);
  return {s, Method::Brute, t.units().size()};
}

inline SumValue kloosterman_brute(i64 m, i64 n, const FactoredModulus& q) {
  return kloosterman_brute(m, n, UnitTable(q.value()));
}

/// c_q(m) = sum_{d | gcd(m, q)} d mu(q/d), exactly.
inline i64 ramanujan(i64 m, const FactoredModulus& q) {
  const u64 g = gcd(reduce(m, q.value()), q.value());
  const u64 gg = g == 0 ? q.value() : g;
  i64 s = 0;
  for (u64 d : q.divisors()) {
    if (gg % d != 0) continue;
    const int mu = factorize(q.value() / d).mobius();
    s += static_cast<i64>(d) * mu;
  }
  return s;
}

/// Twisted multiplicativity: the argument multiplier for the factor
/// q_i of q, namely (q / q_i)^{-1} mod q_i.
inline u64 crt_twist(const FactoredModulus& q, std::size_t i) {
  const u64 qi = q.factors()[i].value();
  return mod_inv(static_cast<i64>((q.value() / qi) % qi), qi);
}

/// The closed form 2 (l n / q) sqrt(q) Re{eps_q e_q(2 l n)} for q = p^j, p odd,
/// j >= 2, gcd(mn, p) = 1 and m = l^2 n (mod q). Exposed separately so the
/// root-choice invariance can be tested.
inline double kloosterman_closed_form(i64 n, u64 p, int j, u64 l) {
  u64 q = 1;
  for (int i = 0; i < j; ++i) q *= p;
  const u64 ln = mul_mod(l, reduce(n, q), q);
  const int chi = jacobi(static_cast<i64>(ln), q);
  const cplx eps = (q % 4 == 1) ? cplx{1, 0} : cplx{0, 1};
  const cplx w = eps * unit_root(static_cast<i64>(mul_mod(2, ln, q)), q);
  return 2.0 * chi * std::sqrt(static_cast<double>(q)) * w.real();
}

/// Fast Kloosterman evaluator for one modulus. Splits q into prime powers,
/// then per odd p^j (j >= 2) uses the pull-out, vanishing and exact
/// evaluation lemmas; primes and powers of two are summed directly.
/// Immutable after construction.
class KloostermanFast {
 public:
  explicit KloostermanFast(FactoredModulus q) : q_(std::move(q)) {
    for (std::size_t i = 0; i < q_.factors().size(); ++i) {
      const auto& f = q_.factors()[i];
      Factor fac;
      fac.p = f.p;
      fac.j = f.j;
      fac.pj = f.value();
      fac.twist = crt_twist(q_, i);
      if (f.p == 2 || f.j == 1) {
        fac.table = std::make_shared<UnitTable>(fac.pj);
      } else {
        fac.table = std::make_shared<UnitTable>(f.p);
      }
      factors_.push_back(std::move(fac));
    }
  }

  const FactoredModulus& modulus() const { return q_; }

  SumValue operator()(i64 m, i64 n) const {
    if (q_.value() == 1) return {cplx{1, 0}, Method::ClosedForm, 1};
    if (factors_.size() == 1) return local(factors_[0], reduce(m, factors_[0].pj), reduce(n, factors_[0].pj));
    SumValue out{cplx{1, 0}, Method::CRT, 0};
    for (const auto& f : factors_) {
      const u64 mm = mul_mod(reduce(m, f.pj), f.twist, f.pj);
      const u64 nn = mul_mod(reduce(n, f.pj), f.twist, f.pj);
      const SumValue part = local(f, mm, nn);
      out.value *= part.value;
      out.terms += part.terms;
    }
    return out;
  }

 private:
  struct Factor {
    u64 p = 0;
    int j = 0;
    u64 pj = 1;
    u64 twist = 1;
    std::shared_ptr<const UnitTable> table;
  };

  // Evaluation modulo one prime power with m, n already reduced.
  SumValue local(const Factor& f, u64 m, u64 n) const {
    if (f.p == 2 || f.j == 1) return kloosterman_brute(static_cast<i64>(m), static_cast<i64>(n), *f.table);
    return odd_power(f, f.j, m, n, Method::ClosedForm);
  }

  SumValue odd_power(const Factor& f, int j, u64 m, u64 n, Method tag) const {
    const u64 p = f.p;
    u64 q = 1;
    for (int i = 0; i < j; ++i) q *= p;
    m %= q;
    n %= q;
    if (j == 1) {
      SumValue s = kloosterman_brute(static_cast<i64>(m), static_cast<i64>(n), *f.table);
      s.method = tag;
      return s;
    }
    const u64 phi = q / p * (p - 1);
    if (m == 0 && n == 0) return {cplx(static_cast<double>(phi), 0), tag, 1};
    if (m == 0 || n == 0) {
      const u64 g = gcd(m == 0 ? n : m, q);
      // c_{p^j}(x): phi when p^j | x, -p^{j-1} when v_p(x) = j-1, else 0.
      double c = 0;
      if (g == q / p) c = -static_cast<double>(q / p);
      return {cplx(c, 0), tag, 1};
    }
    const u64 d = gcd3(m, n, q);
    if (d > 1) {
      // Pull out d = gcd(m, n, q) < q.
      int v = 0;
      for (u64 t = d; t > 1; t /= p) ++v;
      SumValue inner = odd_power(f, j - v, m / d, n / d, Method::Reduced);
      inner.value *= static_cast<double>(d);
      return inner;
    }
    if (gcd(m, q) != gcd(n, q)) return {cplx{}, tag, 1};
    // Here gcd(mn, p) = 1: K = 0 unless m n^{-1} is a square mod q.
    const u64 ratio = mul_mod(m, mod_inv(static_cast<i64>(n), q), q);
    const auto l = sqrt_mod_prime_power(static_cast<i64>(ratio), p, j);
    if (!l) return {cplx{}, tag, 1};
    return {cplx(kloosterman_closed_form(static_cast<i64>(n), p, j, *l), 0), tag, 1};
  }

  FactoredModulus q_;
  std::vector<Factor> factors_;
};

inline SumValue kloosterman_fast(i64 m, i64 n, const FactoredModulus& q) { return KloostermanFast(q)(m, n); }

/// Salie sum: Kloosterman sum twisted by the Jacobi symbol (x/q), q odd.
inline SumValue salie(i64 m, i64 n, const FactoredModulus& q) {
  if (!q.is_odd()) throw EvenModulus("salie sums need odd q, got " + std::to_string(q.value()));
  const UnitTable t(q.value());
  const u64 qq = q.value(), mr = reduce(m, qq), nr = reduce(n, qq);
  cplx s{};
  for (u64 x : t.units()) {
    const int chi = jacobi(static_cast<i64>(x), qq);
    s += static_cast<double>(chi) * t.root((mr * x % qq + nr * t.inv(x) % qq) % qq);
  }
  return {s, Method::Brute, t.units().size()};
}

/// G(m, n; q) = sum over all a mod q of e_q(m a^2 + n a).
inline SumValue gauss(i64 m, i64 n, u64 q) {
  const u64 mr = reduce(m, q), nr = reduce(n, q);
  cplx s{};
  for (u64 a = 0; a < q; ++a) {
    const u64 e = (mul_mod(mr, mul_mod(a, a, q), q) + mul_mod(nr, a, q)) % q;
    s += unit_root(static_cast<i64>(e), q);
  }
  return {s, Method::Brute, q};
}

/// G*(m, n; q): as gauss() but over units only.
inline SumValue gauss_star(i64 m, i64 n, u64 q) {
  const u64 mr = reduce(m, q), nr = reduce(n, q);
  cplx s{};
  u64 terms = 0;
  for (u64 a = 0; a < q; ++a) {
    if (gcd(a, q) != 1) continue;
    const u64 e = (mul_mod(mr, mul_mod(a, a, q), q) + mul_mod(nr, a, q)) % q;
    s += unit_root(static_cast<i64>(e), q);
    ++terms;
  }
  return {s, Method::Brute, terms};
}

/// G*(m, n; q) through the Mobius expansion sum_{d | q} mu(d) G(md, n; q/d).
inline SumValue gauss_star_mobius(i64 m, i64 n, const FactoredModulus& q) {
  SumValue out{cplx{}, Method::Reduced, 0};
  for (auto [d, mu] : q.squarefree_divisors()) {
    const SumValue g = gauss(static_cast<i64>(mul_mod(reduce(m, q.value()), d, q.value())), n, q.value() / d);
    out.value += static_cast<double>(mu) * g.value;
    out.terms += g.terms;
  }
  return out;
}

/// T(x, y, z; q) = (1/q) sum_t K_q(x, t) K_q(y, t) e_q(-z t), summed directly
/// with the inner sums from the fast evaluator.
inline SumValue t_transform_brute(i64 x, i64 y, i64 z, const KloostermanFast& kf) {
  const u64 q = kf.modulus().value();
  cplx s{};
  u64 terms = 0;
  for (u64 t = 0; t < q; ++t) {
    const SumValue a = kf(x, static_cast<i64>(t));
    const SumValue b = kf(y, static_cast<i64>(t));
    s += a.value * b.value * unit_root(-static_cast<i64>(mul_mod(reduce(z, q), t, q)), q);
    terms += a.terms + b.terms;
  }
  return {s / static_cast<double>(q), Method::Brute, terms};
}

inline SumValue t_transform_brute(i64 x, i64 y, i64 z, const FactoredModulus& q) {
  return t_transform_brute(x, y, z, KloostermanFast(q));
}

/// K_q(x, t) for every t in Z_q at once: one length-q transform of
/// v -> e_q(x v^{-1}) over units v.
inline std::vector<cplx> kloosterman_row(i64 x, const UnitTable& t) {
  const u64 q = t.modulus();
  const u64 xr = reduce(x, q);
  std::vector<cplx> g(q);
  for (u64 v : t.units()) g[v] = t.root(mul_mod(xr, t.inv(v), q));
  return dft(g, +1);
}

namespace detail {

// T modulo a single prime power p^j.
inline SumValue t_local(u64 x, u64 y, u64 z, const PrimePower& f) {
  const u64 q = f.value();
  if (f.j == 1) {
    const u64 p = q;
    if (z % p == 0) {
      // T(x, y, 0; p) = c_p(x - y)
      const double c = ((x + p - y) % p == 0) ? static_cast<double>(p - 1) : -1.0;
      return {cplx(c, 0), Method::ClosedForm, 1};
    }
    const UnitTable t(p);
    const u64 zi = t.inv(z % p);
    const SumValue k = kloosterman_brute(static_cast<i64>(mul_mod(x, zi, p)), static_cast<i64>(mul_mod(y, zi, p)), t);
    const cplx v = k.value * t.root(mul_mod((x + y) % p, zi, p)) - 1.0;
    return {v, Method::ClosedForm, k.terms + 1};
  }
  // Prime powers: evaluate every K_q(x, t), K_q(y, t) spectrally, then sum.
  const UnitTable t(q);
  const auto kx = kloosterman_row(static_cast<i64>(x), t);
  const auto ky = kloosterman_row(static_cast<i64>(y), t);
  cplx s{};
  for (u64 tt = 0; tt < q; ++tt) s += kx[tt] * ky[tt] * t.root((q - mul_mod(z, tt, q)) % q);
  return {s / static_cast<double>(q), Method::Brute, 3 * q};
}

}  // namespace detail

/// T(x, y, z; q) through twisted multiplicativity over the prime-power
/// factors; prime factors use the closed identity
/// T(x, y, z; p) = K_p(x/z, y/z) e_p((x + y)/z) - 1 (or c_p(x - y) when p | z).
inline SumValue t_transform_fast(i64 x, i64 y, i64 z, const FactoredModulus& q) {
  if (q.value() == 1) return {cplx{1, 0}, Method::ClosedForm, 1};
  const auto& fs = q.factors();
  if (fs.size() == 1) return detail::t_local(reduce(x, q), reduce(y, q), reduce(z, q), fs[0]);
  SumValue out{cplx{1, 0}, Method::CRT, 0};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const u64 qi = fs[i].value(), tw = crt_twist(q, i);
    const SumValue part = detail::t_local(mul_mod(reduce(x, qi), tw, qi), mul_mod(reduce(y, qi), tw, qi),
                                          reduce(z, qi), fs[i]);
    out.value *= part.value;
    out.terms += part.terms;
  }
  return out;
}

/// d(q) gcd(m, n, q)^{1/2} q^{1/2}: the Weil bound with explicit constant.
inline double weil_bound_rhs(i64 m, i64 n, const FactoredModulus& q) {
  const u64 g = gcd3(reduce(m, q), reduce(n, q), q.value());
  return static_cast<double>(q.divisor_count()) * std::sqrt(static_cast<double>(g)) *
         std::sqrt(static_cast<double>(q.value()));
}

/// Structured right side of the G* bound: d(q) sqrt(q) gcd(m, n, q)^{1/2}.
inline double gauss_star_bound_rhs(i64 m, i64 n, const FactoredModulus& q) { return weil_bound_rhs(m, n, q); }

/// Structured right side of the T bound:
/// d(q)^2 gcd(x, y, q)^{1/2} gcd(x - y, z, q / gcd(x, y, q))^{1/2} q^{1/2}.
inline double t_bound_rhs(i64 x, i64 y, i64 z, const FactoredModulus& q) {
  const u64 qq = q.value();
  const u64 g1 = gcd3(reduce(x, qq), reduce(y, qq), qq);
  const u64 q2 = qq / g1;
  const u64 g2 = gcd3(reduce(x - y, q2), reduce(z, q2), q2);
  const double dq = static_cast<double>(q.divisor_count());
  return dq * dq * std::sqrt(static_cast<double>(g1)) * std::sqrt(static_cast<double>(g2)) *
         std::sqrt(static_cast<double>(qq));
}

}  // namespace ksum
