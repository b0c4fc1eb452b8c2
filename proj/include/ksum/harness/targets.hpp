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

// Bound targets: how a grid point is turned into (|sum|, right-hand side),
// and how grids of points are laid out.

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ksum/bilinear.hpp"
#include "ksum/divisor.hpp"
#include "ksum/errors.hpp"
#include "ksum/harness/records.hpp"
#include "ksum/harness/rng.hpp"
#include "ksum/moments.hpp"

namespace ksum::harness {

enum class Family { TypeI, Product, W, WSharp1, WSharp2, SSharp1, SSharp2, Trivial, PV, Moments, Divisor, SelbergHooley };

struct TargetInfo {
  Family family;
  Variant variant = Variant::A;
  int r = 1;
  std::string variant_name;  // "a".."c", "r1".."r3", or ""
};

inline std::optional<TargetInfo> parse_target(const std::string& name) {
  const auto slash = name.find('/');
  const std::string head = name.substr(0, slash);
  const std::string tail = slash == std::string::npos ? "" : name.substr(slash + 1);
  static const std::map<std::string, Family> abc = {{"thm2.1", Family::TypeI}, {"cor2.2", Family::Product}, {"thm2.3", Family::W}};
  static const std::map<std::string, Family> byr = {{"thm2.4", Family::WSharp1}, {"thm2.5", Family::WSharp2},
                                                    {"thm2.6", Family::SSharp1}, {"thm2.7", Family::SSharp2},
                                                    {"thm3.2", Family::Moments}};
  if (auto it = abc.find(head); it != abc.end()) {
    if (tail == "a") return TargetInfo{it->second, Variant::A, 1, tail};
    if (tail == "b") return TargetInfo{it->second, Variant::B, 1, tail};
    if (tail == "c") return TargetInfo{it->second, Variant::C, 1, tail};
    return std::nullopt;
  }
  if (auto it = byr.find(head); it != byr.end()) {
    if (tail.size() == 2 && tail[0] == 'r' && tail[1] >= '1' && tail[1] <= '3')
      return TargetInfo{it->second, Variant::A, tail[1] - '0', tail};
    return std::nullopt;
  }
  if (!tail.empty()) return std::nullopt;
  if (name == "trivial") return TargetInfo{Family::Trivial, Variant::A, 1, ""};
  if (name == "pv") return TargetInfo{Family::PV, Variant::A, 1, ""};
  if (name == "thm3.3") return TargetInfo{Family::Divisor, Variant::A, 1, ""};
  if (name == "selberg_hooley") return TargetInfo{Family::SelbergHooley, Variant::A, 1, ""};
  return std::nullopt;
}

inline const std::vector<std::string>& theorem_targets() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v;
    for (const char* h : {"thm2.1", "cor2.2", "thm2.3"})
      for (const char* t : {"a", "b", "c"}) v.push_back(std::string(h) + "/" + t);
    for (const char* h : {"thm2.4", "thm2.5", "thm2.6", "thm2.7", "thm3.2"})
      for (const char* t : {"r1", "r2", "r3"}) v.push_back(std::string(h) + "/" + t);
    for (const char* t : {"trivial", "pv", "thm3.3", "selberg_hooley"}) v.emplace_back(t);
    return v;
  }();
  return all;
}

/// One grid point. M doubles as the family length A for the divisor target.
struct Point {
  std::string target;
  u64 q = 0, M = 0, N = 0, K = 0, r = 0;
  i64 c = 0, a = 0;
  u64 X = 0;
  double alpha = 0;
  std::string weights = "rademacher";
  u64 rep = 0;
};

inline Stream point_stream(const Point& p, u64 seed) {
  return Stream(seed, {fnv1a(p.target), p.q, p.M, p.N, p.K, p.r, static_cast<u64>(p.c), static_cast<u64>(p.a), p.X,
                       std::bit_cast<u64>(p.alpha), fnv1a(p.weights), p.rep});
}

inline std::vector<cplx> draw_weights(Stream& s, std::size_t n, const std::string& scheme) {
  std::vector<cplx> v(n);
  if (scheme == "ones") {
    std::fill(v.begin(), v.end(), cplx{1, 0});
  } else if (scheme == "phase") {
    for (auto& x : v) x = std::polar(1.0, kTwoPi * s.uniform());
  } else if (scheme == "rademacher") {
    for (auto& x : v) x = s.coin() ? 1.0 : -1.0;
  } else {
    throw BadInput("unknown weight scheme " + scheme);
  }
  return v;
}

/// M distinct residues mod p, uniformly (partial Fisher-Yates).
inline std::vector<i64> draw_set(Stream& s, u64 p, u64 M) {
  std::vector<i64> all(p);
  for (u64 i = 0; i < p; ++i) all[i] = static_cast<i64>(i);
  for (u64 i = 0; i < M; ++i) std::swap(all[i], all[i + s.below(p - i)]);
  all.resize(M);
  std::sort(all.begin(), all.end());
  return all;
}

/// Shared tau tables, one per X, built on first use.
class SieveCache {
 public:
  std::shared_ptr<const std::vector<std::uint16_t>> get(u64 X) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = cache_[X];
    if (!slot) slot = std::make_shared<const std::vector<std::uint16_t>>(tau_sieve(X));
    return slot;
  }

 private:
  std::mutex mu_;
  std::map<u64, std::shared_ptr<const std::vector<std::uint16_t>>> cache_;
};

struct Evaluation {
  double lhs = 0;
  double rhs_unit = 0;  // right-hand side with constant 1
  std::optional<std::string> skip;
};

namespace detail {

inline Evaluation skipped(std::string why) { return {0, 0, std::move(why)}; }

inline Evaluation bound_eval(double lhs, const BoundSpec& spec, const BoundParams& bp) {
  if (auto bad = bound_precondition(spec, bp)) return skipped(*bad);
  return {lhs, bound_rhs(spec, bp), std::nullopt};
}

inline double max_abs(const std::vector<cplx>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// Evaluates a point: the exact |sum| (or count/moment) and the bound at
/// constant 1. Points outside a bound's registered range come back skipped.
inline Evaluation evaluate_point(const Point& pt, double eps, u64 seed, SieveCache& sieves) {
  const auto info = parse_target(pt.target);
  if (!info) throw BadInput("unknown target " + pt.target);
  Stream s = point_stream(pt, seed);
  const u64 q = pt.q;
  BoundSpec spec;
  spec.variant = info->variant;
  spec.epsilon = eps;
  spec.constant = 1.0;
  BoundParams bp;
  bp.q = static_cast<double>(q);
  bp.r = info->r;

  switch (info->family) {
    case Family::TypeI:
    case Family::Product:
    case Family::Trivial:
    case Family::PV: {
      if (pt.M < 1 || pt.M > q) return detail::skipped("M <= q");
      if (pt.N < 1 || pt.N > q) return detail::skipped("N <= q");
      const auto fq = factorize(q);
      if (info->family == Family::Product && gcd(reduce(pt.a, q), q) != 1) return detail::skipped("gcd(a, q) = 1");
      // a = 0 gives d = q; an m = 0 mod q in I then contributes N phi(q)
      if (reduce(pt.a, q) == 0) return detail::skipped("a != 0 mod q");
      const Interval I{static_cast<i64>(s.below(q)), static_cast<i64>(pt.M)};
      const Interval J{static_cast<i64>(s.below(q)), static_cast<i64>(pt.N)};
      const auto alpha = WeightVector::on_interval(I, draw_weights(s, pt.M, pt.weights));
      bp.M = static_cast<double>(pt.M);
      bp.N = static_cast<double>(pt.N);
      bp.alpha_l2 = alpha.norm_l2();
      bp.alpha_inf = alpha.norm_inf();
      const u64 g = gcd(reduce(pt.a, q), q);
      bp.d = static_cast<double>(g == 0 ? q : g);
      if (info->family == Family::TypeI) {
        spec.theorem = Theorem::TypeI;
        return detail::bound_eval(type1_sum(alpha, J, pt.a, fq).abs(), spec, bp);
      }
      if (info->family == Family::Product) {
        spec.theorem = Theorem::TypeIProduct;
        return detail::bound_eval(cor22_sum(alpha, J, pt.a, fq).abs(), spec, bp);
      }
      const auto beta = WeightVector::on_interval(J, draw_weights(s, pt.N, pt.weights));
      bp.beta_inf = beta.norm_inf();
      spec.theorem = info->family == Family::Trivial ? Theorem::Trivial : Theorem::PolyaVinogradov;
      return detail::bound_eval(type2_sum(alpha, beta, pt.a, fq).abs(), spec, bp);
    }
    case Family::W: {
      if (pt.r == 0 || q % pt.r != 0) return detail::skipped("r | q");
      if (pt.K < 1 || pt.K > pt.r) return detail::skipped("K <= r");
      if (pt.M < 1 || pt.M > q) return detail::skipped("M <= q");
      if (gcd(reduce(pt.a, q), q) != 1) return detail::skipped("gcd(a, q) = 1");
      if (gcd(reduce(pt.c, pt.r), pt.r) != 1 && pt.r > 1) return detail::skipped("gcd(c, r) = 1");
      const auto fq = factorize(q);
      const Interval I{static_cast<i64>(s.below(q)), static_cast<i64>(pt.M)};
      const auto alpha = WeightVector::on_interval(I, draw_weights(s, pt.M, pt.weights));
      auto gamma = draw_weights(s, q, pt.weights);
      for (u64 k = 0; k < q; ++k)
        if (q > 1 && gcd(k, q) != 1) gamma[k] = 0;
      spec.theorem = Theorem::TypeIIW;
      bp.M = static_cast<double>(pt.M);
      bp.K = static_cast<double>(pt.K);
      bp.r_div = static_cast<double>(pt.r);
      bp.alpha_l2 = alpha.norm_l2();
      bp.gamma_inf = detail::max_abs(gamma);
      return detail::bound_eval(w_sum(alpha, gamma, pt.r, pt.c, pt.K, pt.a, fq).abs(), spec, bp);
    }
    case Family::WSharp1:
    case Family::WSharp2:
    case Family::SSharp1:
    case Family::SSharp2: {
      if (!is_prime(q)) return detail::skipped("p prime");
      if (pt.M < 1 || pt.M > q) return detail::skipped("M <= p");
      const bool wsharp = info->family == Family::WSharp1 || info->family == Family::WSharp2;
      const u64 len = wsharp ? pt.K : pt.N;
      if (len < 1 || len > q - 1) return detail::skipped(wsharp ? "K <= p-1" : "N <= p-1");
      if (wsharp && gcd(reduce(pt.a, q), q) != 1) return detail::skipped("gcd(a, p) = 1");
      bp.M = static_cast<double>(pt.M);
      bp.K = static_cast<double>(pt.K);
      bp.N = static_cast<double>(pt.N);
      spec.theorem = info->family == Family::WSharp1   ? Theorem::WSharp1
                     : info->family == Family::WSharp2 ? Theorem::WSharp2
                     : info->family == Family::SSharp1 ? Theorem::SSharp1
                                                       : Theorem::SSharp2;
      if (auto bad = bound_precondition(spec, bp)) return detail::skipped(*bad);
      const auto set = draw_set(s, q, pt.M);
      const auto alpha = WeightVector::on_points(set, draw_weights(s, pt.M, pt.weights));
      bp.alpha_inf = alpha.norm_inf();
      const Interval L{static_cast<i64>(s.below(q - len)), static_cast<i64>(len)};  // inside [1, p-1]
      if (wsharp) {
        const auto gamma = WeightVector::on_interval(L, draw_weights(s, len, pt.weights));
        bp.gamma_inf = gamma.norm_inf();
        return detail::bound_eval(wsharp_sum(alpha, gamma, pt.a, q).abs(), spec, bp);
      }
      return detail::bound_eval(ssharp_sum(alpha, L, q).abs(), spec, bp);
    }
    case Family::Moments: {
      if (!is_prime(q)) return detail::skipped("p prime");
      if (pt.N < 1 || pt.N > q - 1) return detail::skipped("N <= p-1");
      if (auto bad = thm32_precondition(q, pt.N, info->r, pt.alpha)) return detail::skipped(*bad);
      const Interval J{static_cast<i64>(s.below(q - pt.N)), static_cast<i64>(pt.N)};
      const auto prof = m_profile(q, J);
      return {moment(prof, pt.alpha), thm32_rhs(q, pt.N, info->r, pt.alpha, eps, 1.0), std::nullopt};
    }
    case Family::Divisor: {
      if (q < 2) return detail::skipped("q >= 2");
      if (auto bad = thm33_precondition(pt.X, pt.M, q)) return detail::skipped(*bad);
      const auto tau = sieves.get(pt.X);
      const Interval I{static_cast<i64>(s.below(q)), static_cast<i64>(pt.M)};
      const double e = family_error(*tau, pt.X, I, factorize(q));
      return {std::abs(e), thm33_rhs(pt.X, pt.M, q, eps, 1.0), std::nullopt};
    }
    case Family::SelbergHooley: {
      if (q < 2) return detail::skipped("q >= 2");
      if (static_cast<double>(q) > std::pow(static_cast<double>(pt.X), 2.0 / 3.0 - 0.05))
        return detail::skipped("q <= X^(2/3-0.05)");
      if (gcd(reduce(pt.a, q), q) != 1) return detail::skipped("gcd(a, q) = 1");
      const auto tau = sieves.get(pt.X);
      return {std::abs(error_term(*tau, pt.X, pt.a, factorize(q))), selberg_hooley_rhs(pt.X, q), std::nullopt};
    }
  }
  throw BadInput("unhandled target " + pt.target);
}

inline RatioRecord make_record(const Point& pt, const Evaluation& ev, double constant) {
  RatioRecord r;
  r.target = pt.target;
  r.q = pt.q;
  r.M = pt.M;
  r.N = pt.N;
  r.K = pt.K;
  r.r = pt.r;
  r.c = pt.c;
  r.a = pt.a;
  r.X = pt.X;
  r.alpha = pt.alpha;
  r.variant = parse_target(pt.target)->variant_name;
  r.weights = pt.weights;
  if (ev.skip) {
    r.skip(*ev.skip);
    return r;
  }
  r.lhs = ev.lhs;
  r.rhs = constant * ev.rhs_unit;
  r.settle();
  return r;
}

// ---- grids ------------------------------------------------------------------

struct Grid {
  std::vector<u64> moduli;
  std::vector<u64> prime_near;
  std::vector<std::pair<double, double>> exponents;  // (mu, nu)
  std::vector<i64> a = {1};
  u64 divisors_per_q = 2;
  std::vector<u64> X;
  std::vector<double> q_exponents;
  std::vector<double> family_exponents;
  u64 alpha_points = 5;
  std::vector<std::string> weights = {"rademacher"};
  u64 replicates = 1;
};

inline u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

inline u64 ceil_pow(u64 q, double e) {
  const double v = std::pow(static_cast<double>(q), e);
  const double c = std::ceil(v - 1e-9);
  return c < 1 ? 1 : static_cast<u64>(c);
}

inline std::vector<u64> grid_moduli(const Grid& g) {
  std::vector<u64> qs = g.moduli;
  for (u64 n : g.prime_near) qs.push_back(next_prime(n));
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

/// q itself, then the largest proper divisors, up to `count` in total.
inline std::vector<u64> chosen_divisors(u64 q, u64 count) {
  auto ds = factorize(q).divisors();
  std::vector<u64> out;
  for (auto it = ds.rbegin(); it != ds.rend() && out.size() < count; ++it)
    if (*it > 1 || q == 1) out.push_back(*it);
  return out;
}

/// Deterministic unit mod r drawn from (seed, q, r).
inline i64 draw_unit(u64 seed, u64 q, u64 r) {
  if (r <= 1) return 0;
  Stream s(seed, {fnv1a("c"), q, r});
  u64 c = s.below(r);
  while (gcd(c, r) != 1) c = (c + 1) % r;
  return static_cast<i64>(c);
}

inline std::vector<Point> generate_points(const std::string& target, const Grid& g, u64 seed) {
  const auto info = parse_target(target);
  if (!info) throw BadInput("unknown target " + target);
  std::vector<Point> out;
  const bool weightless =
      info->family == Family::Moments || info->family == Family::Divisor || info->family == Family::SelbergHooley;
  const std::vector<std::string> schemes = weightless ? std::vector<std::string>{"none"} : g.weights;
  auto push = [&](Point p) {
    for (const auto& w : schemes)
      for (u64 rep = 0; rep < g.replicates; ++rep) {
        p.weights = w;
        p.rep = rep;
        out.push_back(p);
      }
  };
  Point base;
  base.target = target;
  switch (info->family) {
    case Family::TypeI:
    case Family::Product:
    case Family::Trivial:
    case Family::PV:
      for (u64 q : grid_moduli(g))
        for (auto [mu, nu] : g.exponents)
          for (i64 a : g.a) {
            Point p = base;
            p.q = q;
            p.M = std::min(ceil_pow(q, mu), q);
            p.N = std::min(ceil_pow(q, nu), q);
            p.a = a;
            push(p);
          }
      break;
    case Family::W:
      for (u64 q : grid_moduli(g))
        for (u64 r : chosen_divisors(q, g.divisors_per_q))
          for (auto [mu, nu] : g.exponents)
            for (i64 a : g.a) {
              Point p = base;
              p.q = q;
              p.r = r;
              p.M = std::min(ceil_pow(q, mu), q);
              p.K = std::min(ceil_pow(r, nu), r);
              p.c = r == q ? 1 : draw_unit(seed, q, r);
              p.a = a;
              push(p);
            }
      break;
    case Family::WSharp1:
    case Family::WSharp2:
    case Family::SSharp1:
    case Family::SSharp2: {
      const bool wsharp = info->family == Family::WSharp1 || info->family == Family::WSharp2;
      for (u64 q : grid_moduli(g))
        for (auto [mu, nu] : g.exponents)
          for (i64 a : wsharp ? g.a : std::vector<i64>{0}) {
            Point p = base;
            p.q = q;
            p.r = static_cast<u64>(info->r);
            p.M = std::min(ceil_pow(q, mu), q);
            (wsharp ? p.K : p.N) = std::min(ceil_pow(q, nu), q > 1 ? q - 1 : 1);
            p.a = a;
            push(p);
          }
      break;
    }
    case Family::Moments:
      for (u64 q : grid_moduli(g))
        for (double e : g.q_exponents)
          for (u64 i = 0; i < g.alpha_points; ++i) {
            Point p = base;
            p.q = q;
            p.r = static_cast<u64>(info->r);
            p.N = std::min(ceil_pow(q, e), q > 1 ? q - 1 : 1);
            const double top = max_moment_alpha(info->r);
            p.alpha = g.alpha_points == 1 ? 1.0 : 1.0 + (top - 1.0) * static_cast<double>(i) / static_cast<double>(g.alpha_points - 1);
            push(p);
          }
      break;
    case Family::Divisor:
      for (u64 X : g.X)
        for (double e : g.q_exponents)
          for (double f : g.family_exponents) {
            Point p = base;
            p.X = X;
            p.q = static_cast<u64>(std::llround(std::pow(static_cast<double>(X), e)));
            p.M = ceil_pow(p.q, f);
            push(p);
          }
      break;
    case Family::SelbergHooley:
      for (u64 X : g.X)
        for (double e : g.q_exponents)
          for (i64 a : g.a) {
            Point p = base;
            p.X = X;
            p.q = static_cast<u64>(std::llround(std::pow(static_cast<double>(X), e)));
            p.a = a;
            push(p);
          }
      break;
  }
  return out;
}

}  // namespace ksum::harness
