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

// Fitting and checking the constants of the standalone inequalities: the T
// bound, the J-count bounds, the G* bound and the F_p counting bounds.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ksum/counting.hpp"
#include "ksum/expsums.hpp"
#include "ksum/harness/rng.hpp"
#include "ksum/harness/sweep.hpp"

namespace ksum::harness {

inline const std::vector<std::string>& lemma_targets() {
  static const std::vector<std::string> all = {"lemma4.1", "lemma5.1", "lemma5.2", "lemma5.3",
                                               "lemmaA.2", "lemma6.3", "lemma6.4", "lemma6.6"};
  return all;
}

inline bool is_lemma_target(const std::string& t) {
  return std::find(lemma_targets().begin(), lemma_targets().end(), t) != lemma_targets().end();
}

/// Result of checking an inequality on a sample set.
struct Check {
  u64 instances = 0;
  u64 violations = 0;
  double worst_ratio = 0;  // max lhs / (C * shape)
  std::string worst_case;

  void add(double lhs, double rhs, const std::string& where) {
    ++instances;
    const double r = rhs > 0 ? lhs / rhs : (lhs > 0 ? INFINITY : 0.0);
    if (r > 1.0) ++violations;
    if (r > worst_ratio) {
      worst_ratio = r;
      worst_case = where;
    }
  }
  bool ok() const { return violations == 0; }
};

namespace detail {

inline void fit_add(Fit& f, double lhs, double shape) {
  ++f.samples;
  if (shape > 0) f.max_ratio = std::max(f.max_ratio, lhs / shape);
}

inline u64 random_divisor(Stream& s, const FactoredModulus& q) {
  const auto ds = q.divisors();
  return ds[s.below(ds.size())];
}

// (x, y, z) drawn so that gcd(x, y, q) and gcd(x - y, z, .) cover their strata.
inline void draw_txyz(Stream& s, const FactoredModulus& fq, i64& x, i64& y, i64& z) {
  const u64 q = fq.value();
  const u64 g = random_divisor(s, fq);
  x = static_cast<i64>(g * s.below(q));
  y = static_cast<i64>(g * s.below(q));
  if (s.below(3) == 0) y = x + static_cast<i64>(random_divisor(s, fq) * s.below(q));
  switch (s.below(3)) {
    case 0: z = 0; break;
    case 1: z = static_cast<i64>(random_divisor(s, fq) * s.below(q)); break;
    default: z = static_cast<i64>(s.below(q)); break;
  }
  x = static_cast<i64>(reduce(x, q));
  y = static_cast<i64>(reduce(y, q));
  z = static_cast<i64>(reduce(z, q));
}

// |T(x, y, z; q)| for every z at once: (1/q) times the transform of
// t -> K_q(x, t) K_q(y, t).
inline std::vector<double> t_all_z(const std::vector<cplx>& kx, const std::vector<cplx>& ky) {
  const std::size_t q = kx.size();
  std::vector<cplx> prod(q);
  for (std::size_t t = 0; t < q; ++t) prod[t] = kx[t] * ky[t];
  const auto f = dft(prod, -1);
  std::vector<double> out(q);
  for (std::size_t z = 0; z < q; ++z) out[z] = std::abs(f[z]) / static_cast<double>(q);
  return out;
}

}  // namespace detail

/// Exhaustive up to unit scaling for q <= 150 (pairs (g, y) with g | q cover
/// every orbit), sampled pairs with every z for the rest of the range.
inline Fit fit_lemma41(u64 cap, u64 seed) {
  Fit f;
  for (u64 q = 2; q <= cap; ++q) {
    const auto fq = factorize(q);
    const UnitTable t(q);
    auto row = [&](u64 x) { return kloosterman_row(static_cast<i64>(x), t); };
    auto scan = [&](u64 x, u64 y, const std::vector<cplx>& kx, const std::vector<cplx>& ky) {
      const auto tz = detail::t_all_z(kx, ky);
      for (u64 z = 0; z < q; ++z)
        detail::fit_add(f, tz[z], t_bound_rhs(static_cast<i64>(x), static_cast<i64>(y), static_cast<i64>(z), fq));
    };
    if (q <= 150) {
      std::vector<std::vector<cplx>> rows(q);
      for (u64 y = 0; y < q; ++y) rows[y] = row(y);
      for (u64 g : fq.divisors()) {
        const u64 x = g % q;
        for (u64 y = 0; y < q; ++y) scan(x, y, rows[x], rows[y]);
      }
    } else {
      Stream s(seed, {fnv1a("lemma4.1"), q});
      for (int k = 0; k < 6; ++k) {
        i64 x, y, z;
        detail::draw_txyz(s, fq, x, y, z);
        scan(static_cast<u64>(x), static_cast<u64>(y), row(static_cast<u64>(x)), row(static_cast<u64>(y)));
      }
    }
  }
  return f;
}

inline Check check_lemma41(u64 instances, u64 qmax, double C, u64 seed) {
  Check c;
  Stream s(seed, {fnv1a("check lemma4.1")});
  for (u64 i = 0; i < instances; ++i) {
    const u64 q = 2 + s.below(qmax - 1);
    const auto fq = factorize(q);
    i64 x, y, z;
    detail::draw_txyz(s, fq, x, y, z);
    const double lhs = t_transform_fast(x, y, z, fq).abs();
    c.add(lhs, C * t_bound_rhs(x, y, z, fq),
          "q=" + std::to_string(q) + " x=" + std::to_string(x) + " y=" + std::to_string(y) + " z=" + std::to_string(z));
  }
  return c;
}

/// Both pointwise J bounds over every q <= cap, K <= q and residue a.
inline std::pair<Fit, Fit> fit_lemma51_52(u64 cap, double eps) {
  Fit hb, nw;
  for (u64 q = 2; q <= cap; ++q) {
    const double qe = std::pow(static_cast<double>(q), eps);
    JHistogramSweep sw(q);
    while (sw.K() < q) {
      const u64 K = sw.step();
      const auto& h = sw.histogram();
      for (u64 a = 0; a < q; ++a) {
        const double j = static_cast<double>(h[a]);
        detail::fit_add(hb, j, qe * bound_j_hb(q, static_cast<i64>(a), K));
        detail::fit_add(nw, j, qe * bound_j_new(q, static_cast<i64>(a), K));
      }
    }
  }
  return {hb, nw};
}

/// The averaged J bound over q <= cap, all K and N, a few units a per q.
inline Fit fit_lemma53(u64 cap, double eps, u64 seed) {
  Fit f;
  for (u64 q = 2; q <= cap; ++q) {
    const double qe = std::pow(static_cast<double>(q), eps);
    Stream s(seed, {fnv1a("lemma5.3"), q});
    std::vector<i64> as = {1};
    for (int k = 0; k < 3; ++k) {
      u64 a = s.below(q);
      while (gcd(a, q) != 1) a = (a + 1) % q;
      as.push_back(static_cast<i64>(a));
    }
    JHistogramSweep sw(q);
    while (sw.K() < q) {
      const u64 K = sw.step();
      const auto& h = sw.histogram();
      for (i64 a : as) {
        u64 acc = 0;
        for (u64 N = 1; N <= q; ++N) {
          acc += h[mul_mod(static_cast<u64>(a), N % q, q)];
          detail::fit_add(f, static_cast<double>(acc), qe * bound_j_avg(q, N, K));
        }
      }
    }
  }
  return f;
}

/// Moduli of the extrapolation grid: primes and composites between lo and hi.
inline std::vector<u64> extrapolation_moduli(u64 lo, u64 hi, u64 count, u64 seed) {
  Stream s(seed, {fnv1a("extrapolation"), lo, hi});
  std::vector<u64> qs;
  for (u64 i = 0; i < count; ++i) {
    u64 q = lo + s.below(hi - lo + 1);
    if (i % 2 == 0) q = std::min(hi, next_prime(q));
    qs.push_back(q);
  }
  qs.push_back(hi);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

struct JChecks {
  Check hb, nw, avg;
};

/// Lemmas on the J counts, on moduli in [lo, hi], K on a q^{k/10} ladder.
inline JChecks check_j_bounds(u64 lo, u64 hi, u64 count, double C51, double C52, double C53, double eps, u64 seed) {
  JChecks out;
  for (u64 q : extrapolation_moduli(lo, hi, count, seed)) {
    const double qe = std::pow(static_cast<double>(q), eps);
    std::vector<u64> Ks;
    for (int k = 1; k <= 10; ++k) Ks.push_back(std::min(q, ceil_pow(q, k / 10.0)));
    Stream s(seed, {fnv1a("check J"), q});
    std::vector<i64> as = {0, 1, -1};
    for (u64 d : chosen_divisors(q, 3)) as.push_back(static_cast<i64>(d));
    for (int k = 0; k < 6; ++k) as.push_back(static_cast<i64>(s.below(q)));
    std::vector<i64> units;
    for (i64 a : as)
      if (gcd(reduce(a, q), q) == 1) units.push_back(a);
    JHistogramSweep sw(q);
    for (u64 K : Ks) {
      while (sw.K() < K) sw.step();
      const auto& h = sw.histogram();
      for (i64 a : as) {
        const double j = static_cast<double>(h[reduce(a, q)]);
        const std::string where = "q=" + std::to_string(q) + " K=" + std::to_string(K) + " a=" + std::to_string(a);
        out.hb.add(j, C51 * qe * bound_j_hb(q, a, K), where);
        out.nw.add(j, C52 * qe * bound_j_new(q, a, K), where);
      }
      for (i64 a : units)
        for (int e = 1; e <= 10; ++e) {
          const u64 N = std::min(q, ceil_pow(q, e / 10.0));
          const double lhs = static_cast<double>(j_average_sum(h, q, a, N));
          out.avg.add(lhs, C53 * qe * bound_j_avg(q, N, K),
                      "q=" + std::to_string(q) + " K=" + std::to_string(K) + " a=" + std::to_string(a) +
                          " N=" + std::to_string(N));
        }
    }
  }
  return out;
}

/// Exhaustive: every (m, n) for every q <= cap, G*(m, .) by one transform.
inline Fit fit_lemmaA2(u64 cap) {
  Fit f;
  for (u64 q = 1; q <= cap; ++q) {
    const auto fq = factorize(q);
    const UnitTable t(q);
    for (u64 m = 0; m < q; ++m) {
      std::vector<cplx> g(q);
      for (u64 a : t.units()) g[a] = t.root(mul_mod(m, mul_mod(a, a, q), q));
      const auto G = dft(g, +1);
      for (u64 n = 0; n < q; ++n)
        detail::fit_add(f, std::abs(G[n]), gauss_star_bound_rhs(static_cast<i64>(m), static_cast<i64>(n), fq));
    }
  }
  return f;
}

// ---- F_p counts ---------------------------------------------------------------

/// Test sets for the F_p counts: random sets, intervals and progressions.
inline std::vector<std::vector<i64>> fp_sets(u64 p, u64 size, u64 seed) {
  Stream s(seed, {fnv1a("fp sets"), p, size});
  std::vector<std::vector<i64>> out;
  out.push_back(draw_set(s, p, size));
  std::vector<i64> iv, ap;
  const u64 start = s.below(p), step = 1 + s.below(p - 1);
  for (u64 i = 0; i < size; ++i) {
    iv.push_back(static_cast<i64>((start + i) % p));
    ap.push_back(static_cast<i64>((start + i * step) % p));
  }
  out.push_back(iv);
  out.push_back(ap);
  return out;
}

inline double fp_eps(u64 p, double eps) { return std::pow(static_cast<double>(p), eps); }

inline Fit fit_lemma63(u64 cap, double eps, u64 seed) {
  Fit f;
  for (u64 p = 3; p <= cap; p = next_prime(p + 1)) {
    const u64 top = static_cast<u64>(std::floor(std::sqrt(static_cast<double>(p))));
    for (u64 A = 1; A <= top; ++A)
      for (const auto& set : fp_sets(p, A, seed))
        detail::fit_add(f, static_cast<double>(dp_count(set, p)), fp_eps(p, eps) * dp_bound_rhs(A));
  }
  return f;
}

inline Fit fit_lemma64(u64 cap, double eps, u64 seed) {
  Fit f;
  for (u64 p = 3; p <= cap; p = next_prime(p + 1)) {
    Stream s(seed, {fnv1a("lemma6.4"), p});
    for (int k = 0; k < 8; ++k) {
      const u64 A = 1 + s.below(p - 1), B = 1 + s.below(p - 1);
      const Interval IA{static_cast<i64>(s.below(p - A)), static_cast<i64>(A)};
      const Interval IB{static_cast<i64>(s.below(p - B)), static_cast<i64>(B)};
      detail::fit_add(f, static_cast<double>(product_congruence_count(IA, IB, p)), fp_eps(p, eps) * product_bound_rhs(A, B, p));
    }
  }
  return f;
}

inline Fit fit_lemma66(u64 cap, double eps, u64 seed) {
  Fit f;
  for (u64 p = 3; p <= cap; p = next_prime(p + 1)) {
    Stream s(seed, {fnv1a("lemma6.6"), p});
    const u64 top = static_cast<u64>(std::floor(std::sqrt(static_cast<double>(p))));
    for (u64 C = 1; C <= top; ++C) {
      const u64 A = 1 + s.below(p - 1);
      const Interval IA{static_cast<i64>(s.below(p - A)), static_cast<i64>(A)};
      for (const auto& set : fp_sets(p, C, seed)) {
        const double n = static_cast<double>(mixed_count_N(IA, set, p));
        detail::fit_add(f, std::abs(n - mixed_count_main(A, C, p)), fp_eps(p, eps) * mixed_error_rhs(A, C));
      }
    }
  }
  return f;
}

/// Fits one lemma target. The G* and T shapes carry d(q) factors in place of
/// q^eps, so eps does not enter those two.
inline Fit fit_lemma(const std::string& target, u64 cap, double eps, u64 seed) {
  if (target == "lemma4.1") return fit_lemma41(cap, seed);
  if (target == "lemma5.1") return fit_lemma51_52(cap, eps).first;
  if (target == "lemma5.2") return fit_lemma51_52(cap, eps).second;
  if (target == "lemma5.3") return fit_lemma53(cap, eps, seed);
  if (target == "lemmaA.2") return fit_lemmaA2(cap);
  if (target == "lemma6.3") return fit_lemma63(cap, eps, seed);
  if (target == "lemma6.4") return fit_lemma64(cap, eps, seed);
  if (target == "lemma6.6") return fit_lemma66(cap, eps, seed);
  throw BadInput("unknown lemma target " + target);
}

}  // namespace ksum::harness
