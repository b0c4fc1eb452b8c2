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

// Bilinear forms with complete and incomplete Kloosterman sums, each with a
// literal double sum and a transform-based path, plus the right-hand sides of
// the bounds they are checked against.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ksum/dft.hpp"
#include "ksum/errors.hpp"
#include "ksum/expsums.hpp"
#include "ksum/interval.hpp"
#include "ksum/modarith.hpp"

namespace ksum {

enum class Path { Direct, Dft };

namespace detail {

inline void check_support(const WeightVector& w, u64 q, const char* what) {
  if (w.interval && static_cast<u64>(w.interval->length) > q)
    throw BadInput(std::string(what) + " support is longer than the modulus");
}

inline void check_interval(const Interval& J, u64 q, const char* what) {
  if (J.length < 1) throw BadInput(std::string(what) + " must be non-empty");
  if (static_cast<u64>(J.length) > q) throw BadInput(std::string(what) + " is longer than the modulus");
}

// hat(y) = sum_r f[r] e_q(r y) for all y.
inline std::vector<cplx> forward(const std::vector<cplx>& f) { return dft(f, +1); }

}  // namespace detail

/// S_{q,a}(alpha, beta) = sum_m sum_n alpha_m beta_n K_q(m, a n).
inline SumValue type2_sum(const WeightVector& alpha, const WeightVector& beta, i64 a, const FactoredModulus& q,
                          Path path = Path::Dft) {
  const u64 Q = q.value();
  detail::check_support(alpha, Q, "alpha");
  detail::check_support(beta, Q, "beta");
  if (path == Path::Direct) {
    const KloostermanFast kf(q);
    cplx s{};
    u64 terms = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      for (std::size_t j = 0; j < beta.size(); ++j) {
        const i64 an = static_cast<i64>(mul_mod(reduce(a, Q), reduce(beta.points[j], Q), Q));
        const SumValue k = kf(alpha.points[i], an);
        s += alpha.values[i] * beta.values[j] * k.value;
        terms += k.terms;
      }
    return {s, Method::Brute, terms};
  }
  // K_q(m, a n) = sum_x e_q(m x + a n x^{-1}), so S = sum_x A(x) B(a x^{-1}).
  const UnitTable t(Q);
  const auto A = detail::forward(alpha.folded(Q));
  const auto B = detail::forward(beta.folded(Q));
  const u64 ar = reduce(a, Q);
  cplx s{};
  for (u64 x : t.units()) s += A[x] * B[mul_mod(ar, t.inv(x), Q)];
  return {s, Method::Reduced, 2 * Q + t.units().size()};
}

/// S_{q,a}(alpha) = sum_m sum_{n in J} alpha_m K_q(m, a n).
inline SumValue type1_sum(const WeightVector& alpha, const Interval& J, i64 a, const FactoredModulus& q,
                          Path path = Path::Dft) {
  const u64 Q = q.value();
  detail::check_support(alpha, Q, "alpha");
  detail::check_interval(J, Q, "J");
  if (path == Path::Direct)
    return type2_sum(alpha, WeightVector::on_interval(J, std::vector<cplx>(J.length, 1.0)), a, q, Path::Direct);
  const UnitTable t(Q);
  const auto A = detail::forward(alpha.folded(Q));
  const u64 ar = reduce(a, Q);
  cplx s{};
  for (u64 x : t.units()) s += A[x] * interval_character_sum(J, static_cast<i64>(mul_mod(ar, t.inv(x), Q)), Q);
  return {s, Method::Reduced, Q + t.units().size()};
}

/// sum_m sum_{n in J} alpha_m K_q(m n, a).
inline SumValue cor22_sum(const WeightVector& alpha, const Interval& J, i64 a, const FactoredModulus& q,
                          Path path = Path::Dft) {
  const u64 Q = q.value();
  detail::check_support(alpha, Q, "alpha");
  detail::check_interval(J, Q, "J");
  if (path == Path::Direct) {
    const KloostermanFast kf(q);
    cplx s{};
    u64 terms = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      for (i64 j = 0; j < J.length; ++j) {
        const i64 mn = static_cast<i64>(mul_mod(reduce(alpha.points[i], Q), reduce(J.at(j), Q), Q));
        const SumValue k = kf(mn, a);
        s += alpha.values[i] * k.value;
        terms += k.terms;
      }
    return {s, Method::Brute, terms};
  }
  // Write m = g u with g | q and u a unit mod q. Then K_q(m n, a) =
  // K_q(g n, a u), and P_g(l) = sum_{n in J} K_q(g n, l) is one transform
  // of y -> sum_{n in J} e_q(g n y^{-1}) over the units y.
  const UnitTable t(Q);
  const u64 ar = reduce(a, Q);
  std::vector<std::pair<u64, u64>> gu(alpha.size());  // (g, u) per point
  std::vector<u64> gs;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const u64 m = reduce(alpha.points[i], Q);
    const u64 g = Q == 1 ? 1 : (m == 0 ? Q : gcd(m, Q));
    u64 u = (m / g) % (Q / g == 0 ? 1 : Q / g);
    if (Q > 1) {
      const u64 step = Q / g;
      while (gcd(u % Q, Q) != 1) u += step;
      u %= Q;
    }
    gu[i] = {g, u};
    gs.push_back(g);
  }
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  std::vector<cplx> B(Q);
  for (u64 x = 0; x < Q; ++x) B[x] = interval_character_sum(J, static_cast<i64>(x), Q);
  cplx s{};
  for (u64 g : gs) {
    std::vector<cplx> f(Q);
    for (u64 y : t.units()) f[y] = B[mul_mod(g % Q, t.inv(y), Q)];
    const auto P = dft(f, +1);
    for (std::size_t i = 0; i < alpha.size(); ++i)
      if (gu[i].first == g) s += alpha.values[i] * P[mul_mod(ar, gu[i].second, Q)];
  }
  return {s, Method::Reduced, (gs.size() + 1) * Q};
}

/// Units k of Z_q with <c k>_r <= K.
inline std::vector<u64> admissible_units(u64 q, u64 r, i64 c, u64 K) {
  std::vector<u64> out;
  const u64 cr = reduce(c, r);
  for (u64 k = 1; k <= q; ++k) {
    const u64 kk = k % q;
    if (q > 1 && gcd(kk, q) != 1) continue;
    const u64 v = r == 0 ? 0 : mul_mod(cr, kk % r, r);
    if ((v == 0 ? r : v) <= K) out.push_back(kk);
  }
  return out;
}

/// W_{q,a}(alpha, gamma; r, c) = sum_m sum_{k unit, <ck>_r <= K} alpha_m gamma_k e_q(a m k^{-1}).
/// gamma has one entry per residue mod q; non-units are ignored.
inline SumValue w_sum(const WeightVector& alpha, const std::vector<cplx>& gamma, u64 r, i64 c, u64 K, i64 a,
                      const FactoredModulus& q, Path path = Path::Dft) {
  const u64 Q = q.value();
  detail::check_support(alpha, Q, "alpha");
  if (gamma.size() != Q) throw BadInput("gamma must have one entry per residue mod q");
  if (r == 0 || Q % r != 0) throw BadInput("r must divide q");
  if (gcd(reduce(c, r), r) != 1 && r > 1) throw NonCoprime("c must be a unit mod r");
  if (K > r) throw BadInput("need K <= r");
  const auto ks = admissible_units(Q, r, c, K);
  const u64 ar = reduce(a, Q);
  if (path == Path::Direct) {
    cplx s{};
    for (u64 k : ks) {
      const u64 ki = Q == 1 ? 0 : mod_inv(static_cast<i64>(k), Q);
      const u64 aki = mul_mod(ar, ki, Q);
      cplx inner{};
      for (std::size_t i = 0; i < alpha.size(); ++i)
        inner += alpha.values[i] * unit_root(static_cast<i64>(mul_mod(reduce(alpha.points[i], Q), aki, Q)), Q);
      s += gamma[k] * inner;
    }
    return {s, Method::Brute, alpha.size() * ks.size()};
  }
  const auto A = detail::forward(alpha.folded(Q));
  const UnitTable t(Q);
  cplx s{};
  for (u64 k : ks) s += gamma[k] * A[mul_mod(ar, Q == 1 ? 0 : t.inv(k), Q)];
  return {s, Method::Reduced, Q + ks.size()};
}

/// W#_{p,a}(alpha, gamma) = sum_{m in M} sum_{k in K} alpha_m gamma_k e_p(a m k^{-1}).
inline SumValue wsharp_sum(const WeightVector& alpha, const WeightVector& gamma, i64 a, u64 p, Path path = Path::Dft) {
  if (!gamma.interval) throw BadInput("gamma must live on an interval");
  if (gamma.interval->contains_multiple_of(p)) throw ZeroInSupport("the k-interval meets 0 mod p");
  detail::check_support(gamma, p, "gamma");
  const u64 ar = reduce(a, p);
  if (path == Path::Direct) {
    cplx s{};
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      const u64 ki = mod_inv(gamma.points[j], p);
      const u64 aki = mul_mod(ar, ki, p);
      for (std::size_t i = 0; i < alpha.size(); ++i)
        s += alpha.values[i] * gamma.values[j] *
             unit_root(static_cast<i64>(mul_mod(reduce(alpha.points[i], p), aki, p)), p);
    }
    return {s, Method::Brute, alpha.size() * gamma.size()};
  }
  // g(v) = sum of gamma_k over k with k^{-1} = v; G = its transform.
  std::vector<cplx> g(p);
  for (std::size_t j = 0; j < gamma.size(); ++j) g[mod_inv(gamma.points[j], p)] += gamma.values[j];
  const auto G = detail::forward(g);
  cplx s{};
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha.values[i] * G[mul_mod(ar, reduce(alpha.points[i], p), p)];
  return {s, Method::Reduced, p + alpha.size()};
}

/// prof[l] = sum_{n in J} K_q(l, n) for every l in Z_q, via one transform of
/// x -> sum_{n in J} e_q(n x^{-1}) over the units.
inline std::vector<cplx> short_kloosterman_profile(u64 q, const Interval& J) {
  const UnitTable t(q);
  std::vector<cplx> g(q);
  for (u64 x : t.units()) g[x] = interval_character_sum(J, static_cast<i64>(t.inv(x)), q);
  return dft(g, +1);
}

/// S#_p(alpha) = sum_{m in M} sum_{n in J} alpha_m K_p(m, n).
inline SumValue ssharp_sum(const WeightVector& alpha, const Interval& J, u64 p, Path path = Path::Dft) {
  detail::check_interval(J, p, "J");
  if (path == Path::Direct) {
    const UnitTable t(p);
    cplx s{};
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      cplx inner{};
      for (i64 j = 0; j < J.length; ++j) inner += kloosterman_brute(alpha.points[i], J.at(j), t).value;
      s += alpha.values[i] * inner;
    }
    return {s, Method::Brute, alpha.size() * J.length * p};
  }
  const auto prof = short_kloosterman_profile(p, J);
  cplx s{};
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha.values[i] * prof[reduce(alpha.points[i], p)];
  return {s, Method::Reduced, p + alpha.size()};
}

// ---- bound families -------------------------------------------------------

enum class Variant { A, B, C };

inline double delta1(double M, double N, double q, double d, Variant v) {
  switch (v) {
    case Variant::A:
      return std::pow(M, -0.25) / N * std::sqrt(q) * std::pow(d, -0.25) + std::sqrt(q) / N / std::sqrt(M) +
             1.0 / std::sqrt(N);
    case Variant::B:
      return (std::pow(N, -0.75) * std::sqrt(q) + std::sqrt(d)) / std::sqrt(M) + 1.0 / std::sqrt(N);
    case Variant::C:
      return (std::sqrt(q) / N + std::pow(q * d, 0.25)) / std::sqrt(M) + 1.0 / std::sqrt(N);
  }
  return 0;
}

inline double delta2(double M, double K, double q, double r, Variant v) {
  const double tail = 1.0 / std::sqrt(K * q / r);
  switch (v) {
    case Variant::A:
      return std::pow(M * q / r, -0.25) + 1.0 / std::sqrt(M) + tail;
    case Variant::B:
      return (1.0 + std::pow(K / r, -0.25) + std::sqrt(r) / K) / std::sqrt(M) + tail;
    case Variant::C:
      return (1.0 + std::pow(r, 0.25) / std::sqrt(K) + std::pow(r, 0.75) / K) / std::sqrt(M) + tail;
  }
  return 0;
}

enum class Theorem {
  TypeI,         // S_{q,a}(alpha) with Delta_1
  TypeIProduct,  // sum alpha_m K_q(mn, a), Delta_1 at d = 1
  TypeIIW,       // W_{q,a}(alpha, gamma; r, c) with Delta_2
  WSharp1,
  WSharp2,
  SSharp1,
  SSharp2,
  Trivial,
  PolyaVinogradov,
};

/// Everything a right-hand side may read. Unused fields are ignored.
struct BoundParams {
  double q = 1, M = 1, N = 1, K = 1;
  double d = 1;           // gcd(a, q)
  double r_div = 1;       // divisor r of q (incomplete sums)
  int r = 1;              // fixed integer r of the arbitrary-set bounds
  double alpha_l2 = 1, alpha_inf = 1, beta_inf = 1, gamma_inf = 1;
};

struct BoundSpec {
  Theorem theorem = Theorem::Trivial;
  Variant variant = Variant::A;
  double epsilon = 0.05;
  double constant = 1.0;
};

namespace detail {
inline bool geq(double x, double y) { return x >= y * (1.0 - 1e-12); }
inline bool leq(double x, double y) { return x <= y * (1.0 + 1e-12); }
}  // namespace detail

/// Names the first failed precondition of a bound, verbatim, or nullopt.
inline std::optional<std::string> bound_precondition(const BoundSpec& s, const BoundParams& b) {
  if (!(s.epsilon >= 0 && s.epsilon <= 0.25)) return "0 <= epsilon <= 0.25";
  if (!(s.constant > 0)) return "constant > 0";
  const double p = b.q, r = b.r;
  switch (s.theorem) {
    case Theorem::TypeIIW: {
      const auto ri = static_cast<u64>(std::llround(b.r_div)), qi = static_cast<u64>(std::llround(b.q));
      if (ri == 0 || qi % ri != 0) return "r | q";
      if (!detail::leq(b.K, b.r_div)) return "K <= r";
      break;
    }
    case Theorem::WSharp1:
      if (!detail::geq(b.K, std::pow(p, 1.0 / r))) return "K >= p^(1/r)";
      break;
    case Theorem::WSharp2:
      if (!detail::leq(b.M, std::sqrt(p))) return "M <= p^(1/2)";
      if (!detail::geq(b.K, std::pow(p, 1.0 / r))) return "K >= p^(1/r)";
      break;
    case Theorem::SSharp1:
      if (!detail::leq(b.N, std::pow(p, 1.0 - 1.0 / r))) return "N <= p^(1-1/r)";
      break;
    case Theorem::SSharp2:
      if (!detail::leq(b.N, std::pow(p, 1.0 - 1.0 / r))) return "N <= p^(1-1/r)";
      if (!detail::leq(b.M, std::sqrt(p))) return "M <= p^(1/2)";
      break;
    default:
      break;
  }
  return std::nullopt;
}

/// The bound with q^{o(1)} replaced by q^epsilon and the calibrated constant
/// applied. Throws OutOfRange naming the failed precondition.
inline double bound_rhs(const BoundSpec& s, const BoundParams& b) {
  if (auto bad = bound_precondition(s, b)) throw OutOfRange(*bad);
  const double q = b.q, M = b.M, N = b.N, K = b.K, r = b.r, qe = std::pow(q, s.epsilon);
  double v = 0;
  switch (s.theorem) {
    case Theorem::TypeI:
      v = b.alpha_l2 * std::sqrt(M) * N * std::sqrt(q) * delta1(M, N, q, b.d, s.variant);
      break;
    case Theorem::TypeIProduct:
      v = b.alpha_l2 * std::sqrt(M) * N * std::sqrt(q) * delta1(M, N, q, 1.0, s.variant);
      break;
    case Theorem::TypeIIW:
      v = b.alpha_l2 * b.gamma_inf * std::sqrt(M) * K * q / b.r_div * delta2(M, K, q, b.r_div, s.variant);
      break;
    case Theorem::WSharp1:
      v = b.alpha_inf * b.gamma_inf * M * K * std::pow(1.0 / M + std::pow(q, 1.0 + 1.0 / r) / (M * K * K), 7.0 / (24.0 * r));
      break;
    case Theorem::WSharp2:
      v = b.alpha_inf * b.gamma_inf * M * K *
          std::pow(std::pow(M, -2.0 * r) + 1.0 / K + std::pow(q, 1.0 + 1.0 / r) / (std::pow(M, 10.0 / 13.0) * K * K),
                   1.0 / (4.0 * r));
      break;
    case Theorem::SSharp1: {
      const double e = 7.0 / (24.0 * r);
      v = b.alpha_inf * M * N * std::sqrt(q) *
          (std::sqrt(q) / (std::pow(M, e) * N) +
           std::pow(q, 0.5 - 7.0 * (r - 1) / (24.0 * r * r)) / (std::pow(M, e) * std::pow(N, 1.0 - 7.0 / (12.0 * r))));
      break;
    }
    case Theorem::SSharp2:
      v = b.alpha_inf * M * N * std::sqrt(q) *
          (std::sqrt(q) / (std::sqrt(M) * N) + std::pow(q, 0.5 - 1.0 / (4.0 * r)) / std::pow(N, 1.0 - 1.0 / (4.0 * r)) +
           std::pow(q, 0.5 - (r - 1) / (4.0 * r * r)) /
               (std::pow(M, 13.0 / (40.0 * r)) * std::pow(N, 1.0 - 1.0 / (2.0 * r))));
      break;
    case Theorem::Trivial:
      v = b.alpha_inf * b.beta_inf * M * N * std::sqrt(q);
      break;
    case Theorem::PolyaVinogradov:
      v = b.alpha_inf * b.beta_inf * M * N * std::sqrt(q) *
          (std::pow(q, 0.25) / std::sqrt(M) + std::pow(q, -0.25) + 1.0 / std::sqrt(N));
      break;
  }
  return s.constant * qe * v;
}

/// ||alpha||_2 ||gamma||_inf M^{1/2} (number of admissible k): the trivial
/// ceiling for W.
inline double w_trivial_ceiling(const WeightVector& alpha, const std::vector<cplx>& gamma, std::size_t count) {
  double gi = 0;
  for (const auto& g : gamma) gi = std::max(gi, std::abs(g));
  return alpha.norm_l2() * gi * std::sqrt(static_cast<double>(alpha.size())) * static_cast<double>(count);
}

}  // namespace ksum
