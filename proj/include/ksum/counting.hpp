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

// Reciprocal-difference counts J_q(a, K), their restricted variant, and the
// additive/multiplicative counts over F_p used by the arbitrary-set bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ksum/errors.hpp"
#include "ksum/interval.hpp"
#include "ksum/modarith.hpp"

namespace ksum {

struct CountQuery {
  FactoredModulus q;
  i64 a = 0;
  u64 K = 1;
  std::optional<u64> r;  // divisor of q
  std::optional<i64> c;  // unit mod r

  void validate() const {
    if (K < 1 || K > q.value()) throw BadInput("need 1 <= K <= q");
    if (r.has_value() != c.has_value()) throw BadInput("r and c must be given together");
    if (r) {
      if (*r == 0 || q.value() % *r != 0) throw BadInput("r must divide q");
      if (gcd(reduce(*c, *r), *r) != 1) throw NonCoprime("c must be a unit mod r");
      if (K > *r) throw BadInput("need K <= r");
    }
  }
};

/// O(K^2) double loop; pairs with a non-unit member are not counted.
inline u64 j_count_brute(const CountQuery& qr) {
  qr.validate();
  const u64 q = qr.q.value();
  const u64 a = reduce(qr.a, q);
  std::vector<u64> inv(qr.K + 1, 0);
  std::vector<bool> unit(qr.K + 1, false);
  for (u64 k = 1; k <= qr.K; ++k) {
    if (gcd(k % q, q) != 1 && q != 1) continue;
    unit[k] = true;
    inv[k] = q == 1 ? 0 : mod_inv(static_cast<i64>(k), q);
  }
  u64 count = 0;
  for (u64 k1 = 1; k1 <= qr.K; ++k1) {
    if (!unit[k1]) continue;
    for (u64 k2 = 1; k2 <= qr.K; ++k2)
      if (unit[k2] && (inv[k1] + q - inv[k2]) % q == a) ++count;
  }
  return count;
}

/// J_q(., K) evaluator for one modulus: inverses of 1..q-1 are computed
/// once, then each count looks up k1^{-1} - a in a direct-address table.
class JCounter {
 public:
  explicit JCounter(u64 q) : q_(q), inv_(q, 0), pos_(q, 0) {
    for (u64 k = 1; k < q; ++k)
      if (gcd(k, q) == 1) inv_[k] = mod_inv(static_cast<i64>(k), q);
  }

  u64 modulus() const { return q_; }

  u64 count(i64 a, u64 K) const {
    if (K > q_) throw BadInput("need K <= q");
    if (q_ == 1) return K * K;
    const u64 ar = reduce(a, q_);
    // pos_[v] = k when v = k^{-1} with k <= K, else 0.
    for (u64 k = 1; k <= K && k < q_; ++k)
      if (inv_[k] != 0) pos_[inv_[k]] = k;
    u64 c = 0;
    for (u64 k = 1; k <= K && k < q_; ++k) {
      if (inv_[k] == 0) continue;
      const u64 want = (inv_[k] + q_ - ar) % q_;
      if (pos_[want] != 0) ++c;
    }
    for (u64 k = 1; k <= K && k < q_; ++k)
      if (inv_[k] != 0) pos_[inv_[k]] = 0;
    return c;
  }

 private:
  u64 q_;
  std::vector<u64> inv_;
  mutable std::vector<u64> pos_;  // scratch; not shareable across threads
};

/// Hash k^{-1} -> k for k <= K, then look up k1^{-1} - a for each k1.
inline u64 j_count_fast(const CountQuery& qr) {
  qr.validate();
  const u64 q = qr.q.value();
  if (q == 1) return qr.K * qr.K;
  const u64 a = reduce(qr.a, q);
  std::unordered_map<u64, u64> by_inverse;
  by_inverse.reserve(qr.K * 2);
  std::vector<u64> invs;
  invs.reserve(qr.K);
  for (u64 k = 1; k <= qr.K; ++k) {
    if (gcd(k, q) != 1) continue;
    const u64 v = mod_inv(static_cast<i64>(k), q);
    ++by_inverse[v];
    invs.push_back(v);
  }
  u64 count = 0;
  for (u64 v : invs) {
    auto it = by_inverse.find((v + q - a) % q);
    if (it != by_inverse.end()) count += it->second;
  }
  return count;
}

/// Histogram h[a] = J_q(a, K) for every residue a at once, O(K^2 + q).
inline std::vector<u64> j_histogram(u64 q, u64 K) {
  std::vector<u64> h(q, 0);
  std::vector<u64> invs;
  for (u64 k = 1; k <= K; ++k)
    if (q == 1 || gcd(k, q) == 1) invs.push_back(q == 1 ? 0 : mod_inv(static_cast<i64>(k), q));
  for (u64 x : invs)
    for (u64 y : invs) ++h[(x + q - y) % q];
  return h;
}

/// Grows J_q(., K) one K at a time; each step is O(K).
class JHistogramSweep {
 public:
  explicit JHistogramSweep(u64 q) : q_(q), h_(q, 0) {}

  // Advance K by one; returns the new K.
  u64 step() {
    ++K_;
    if (q_ == 1 || gcd(K_ % q_, q_) == 1) {
      const u64 v = q_ == 1 ? 0 : mod_inv(static_cast<i64>(K_), q_);
      for (u64 x : invs_) {
        ++h_[(x + q_ - v) % q_];
        ++h_[(v + q_ - x) % q_];
      }
      ++h_[0];
      invs_.push_back(v);
    }
    return K_;
  }

  u64 K() const { return K_; }
  const std::vector<u64>& histogram() const { return h_; }

 private:
  u64 q_;
  u64 K_ = 0;
  std::vector<u64> h_;
  std::vector<u64> invs_;
};

/// <n>_r: the representative of n mod r in [1, r].
inline u64 rep_one_based(i64 n, u64 r) {
  const u64 v = reduce(n, r);
  return v == 0 ? r : v;
}

/// Pairs of units (k1, k2) mod q with k1^{-1} - k2^{-1} = a and <c k_i>_r <= K.
inline u64 j_count_restricted(const CountQuery& qr) {
  qr.validate();
  if (!qr.r) throw BadInput("restricted count needs (r, c)");
  const u64 q = qr.q.value(), r = *qr.r;
  const i64 c = *qr.c;
  if (q == 1) return 1;
  const u64 a = reduce(qr.a, q);
  std::unordered_map<u64, u64> by_inverse;
  std::vector<u64> invs;
  for (u64 k = 1; k < q; ++k) {
    if (gcd(k, q) != 1) continue;
    if (rep_one_based(static_cast<i64>(mul_mod(reduce(c, r), k % r, r)), r) > qr.K) continue;
    const u64 v = mod_inv(static_cast<i64>(k), q);
    ++by_inverse[v];
    invs.push_back(v);
  }
  u64 count = 0;
  for (u64 v : invs) {
    auto it = by_inverse.find((v + q - a) % q);
    if (it != by_inverse.end()) count += it->second;
  }
  return count;
}

/// (q / r) J_r(c^{-1} a, K): the ceiling for the restricted count.
inline u64 j_restricted_ceiling(const CountQuery& qr) {
  const u64 q = qr.q.value(), r = *qr.r;
  if (r == 1) return q * j_count_fast({factorize(1), 0, 1, {}, {}});
  const i64 ca = static_cast<i64>(mul_mod(mod_inv(*qr.c, r), reduce(qr.a, r), r));
  return (q / r) * j_count_fast({factorize(r), ca, std::min(qr.K, r), {}, {}});
}

inline double gcd_or_q(i64 a, u64 q) {
  const u64 g = gcd(reduce(a, q), q);
  return static_cast<double>(g == 0 ? q : g);
}

/// K^{3/2} q^{-1/2} + K^2 gcd(a, q) / q + 1
inline double bound_j_hb(u64 q, i64 a, u64 K) {
  const double Q = static_cast<double>(q), k = static_cast<double>(K);
  return std::pow(k, 1.5) / std::sqrt(Q) + k * k * gcd_or_q(a, q) / Q + 1.0;
}

/// K^2 / q + K gcd(a, q)^{1/2} q^{-1/2} + q^{1/2}
inline double bound_j_new(u64 q, i64 a, u64 K) {
  const double Q = static_cast<double>(q), k = static_cast<double>(K);
  return k * k / Q + k * std::sqrt(gcd_or_q(a, q)) / std::sqrt(Q) + std::sqrt(Q);
}

/// K^2 N^{1/2} q^{-1/2} + K, bounding sum_{n <= N} J_q(a n, K).
inline double bound_j_avg(u64 q, u64 N, u64 K) {
  const double k = static_cast<double>(K);
  return k * k * std::sqrt(static_cast<double>(N)) / std::sqrt(static_cast<double>(q)) + k;
}

/// sum_{n <= N} J_q(a n, K) from one histogram.
inline u64 j_average_sum(const std::vector<u64>& hist, u64 q, i64 a, u64 N) {
  const u64 ar = reduce(a, q);
  u64 s = 0;
  for (u64 n = 1; n <= N; ++n) s += hist[mul_mod(ar, n % q, q)];
  return s;
}

// ---- counts over F_p -------------------------------------------------------

/// Sorted distinct residues of a set, validated to lie in [0, p).
inline std::vector<u64> as_residue_set(const std::vector<i64>& s, u64 p) {
  std::vector<u64> out;
  out.reserve(s.size());
  for (i64 x : s) out.push_back(reduce(x, p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// E(A, B) = #{a1 - a2 = b1 - b2}, via difference histograms.
inline u64 additive_energy(const std::vector<i64>& A, const std::vector<i64>& B, u64 p) {
  const auto a = as_residue_set(A, p), b = as_residue_set(B, p);
  std::unordered_map<u64, u64> da;
  for (u64 x : a)
    for (u64 y : a) ++da[(x + p - y) % p];
  u64 e = 0;
  for (u64 x : b)
    for (u64 y : b) {
      auto it = da.find((x + p - y) % p);
      if (it != da.end()) e += it->second;
    }
  return e;
}

inline u64 additive_energy(const std::vector<i64>& A, u64 p) { return additive_energy(A, A, p); }

/// D_p(A) = #{(a1..a8): (a1 - a2)(a3 - a4) = (a5 - a6)(a7 - a8)}.
/// Ordered differences are histogrammed first, so the product pass runs over
/// distinct differences only.
inline u64 dp_count(const std::vector<i64>& A, u64 p) {
  const auto a = as_residue_set(A, p);
  if (a.size() > 200) throw TooLarge("dp_count is capped at |A| = 200");
  std::unordered_map<u64, u64> diff;
  for (u64 x : a)
    for (u64 y : a) ++diff[(x + p - y) % p];
  std::vector<std::pair<u64, u64>> d(diff.begin(), diff.end());
  std::unordered_map<u64, unsigned __int128> prod;
  prod.reserve(d.size() * d.size());
  for (auto [u, cu] : d)
    for (auto [v, cv] : d) prod[mul_mod(u, v, p)] += static_cast<unsigned __int128>(cu) * cv;
  unsigned __int128 s = 0;
  for (auto& [_, f] : prod) s += f * f;
  return static_cast<u64>(s);
}

/// #{(a1, a2, b1, b2) in A^2 x B^2: a1 b1 = a2 b2 in F_p}, intervals in F_p^*.
inline u64 product_congruence_count(const Interval& A, const Interval& B, u64 p) {
  std::unordered_map<u64, u64> h;
  for (i64 i = 0; i < A.length; ++i)
    for (i64 j = 0; j < B.length; ++j) {
      const u64 a = reduce(A.at(i), p), b = reduce(B.at(j), p);
      if (a == 0 || b == 0) throw ZeroInSupport("product count needs intervals inside F_p^*");
      ++h[mul_mod(a, b, p)];
    }
  u64 s = 0;
  for (auto& [_, f] : h) s += f * f;
  return s;
}

/// #{(a1, a2, c1..c4): a1 (c1 - c2) = a2 (c3 - c4) != 0 in F_p}.
inline u64 mixed_count_N(const Interval& A, const std::vector<i64>& C, u64 p) {
  const auto c = as_residue_set(C, p);
  std::unordered_map<u64, u64> diff;
  for (u64 x : c)
    for (u64 y : c)
      if (x != y) ++diff[(x + p - y) % p];
  std::unordered_map<u64, u64> h;
  for (i64 i = 0; i < A.length; ++i) {
    const u64 a = reduce(A.at(i), p);
    if (a == 0) throw ZeroInSupport("mixed count needs A inside F_p^*");
    for (auto [d, cd] : diff) h[mul_mod(a, d, p)] += cd;
  }
  u64 s = 0;
  for (auto& [_, f] : h) s += f * f;
  return s;
}

/// Main term A^2 C^4 / p of the mixed count.
inline double mixed_count_main(u64 A, u64 C, u64 p) {
  const double a = static_cast<double>(A), c = static_cast<double>(C);
  return a * a * c * c * c * c / static_cast<double>(p);
}

/// Structured sides of the F_p counting bounds (no p^eps, no constant).
inline double dp_bound_rhs(u64 A) { return std::pow(static_cast<double>(A), 84.0 / 13.0); }
inline double product_bound_rhs(u64 A, u64 B, u64 p) {
  const double ab = static_cast<double>(A) * static_cast<double>(B);
  return (ab / static_cast<double>(p) + 1.0) * ab;
}
inline double mixed_error_rhs(u64 A, u64 C) {
  return static_cast<double>(A) * std::pow(static_cast<double>(C), 42.0 / 13.0);
}

}  // namespace ksum
