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

// The identity suite: exact identities and explicit inequalities among the
// sums, each checked against an independent direct evaluation for every
// modulus up to a budget.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ksum/bilinear.hpp"
#include "ksum/counting.hpp"
#include "ksum/divisor.hpp"
#include "ksum/expsums.hpp"
#include "ksum/harness/records.hpp"
#include "ksum/harness/rng.hpp"
#include "ksum/moments.hpp"

namespace ksum::harness {

struct IdentityResult {
  std::string name;
  std::string module;
  u64 checks = 0;
  u64 failures = 0;
  double worst = 0;  // worst deviation, or worst lhs/rhs for inequalities
  std::string worst_case;

  bool pass() const { return failures == 0; }
};

struct SuiteOptions {
  u64 budget = 500;
  std::string scope;  // module name, empty for all
  u64 seed = 1;
  u64 samples = 24;  // (m, n) pairs per modulus
  bool inject_fault = false;
};

struct SuiteReport {
  SuiteOptions options;
  std::vector<IdentityResult> results;
  double seconds = 0;

  bool pass() const {
    for (const auto& r : results)
      if (!r.pass()) return false;
    return true;
  }
};

namespace detail {

class Recorder {
 public:
  Recorder(std::string module, std::string name) { r_.module = std::move(module), r_.name = std::move(name); }

  // |got - want| <= tol
  void equal(cplx got, cplx want, double tol, const std::string& where) { deviation(std::abs(got - want), tol, where); }

  void deviation(double dev, double tol, const std::string& where) {
    ++r_.checks;
    if (!(dev <= tol)) ++r_.failures;
    if (dev > r_.worst || std::isnan(dev)) {
      r_.worst = dev;
      r_.worst_case = where;
    }
  }

  // lhs <= rhs, worst recorded as the ratio
  void at_most(double lhs, double rhs, const std::string& where) {
    ++r_.checks;
    if (!(lhs <= rhs * (1 + 1e-9) + 1e-9)) ++r_.failures;
    const double ratio = rhs > 0 ? lhs / rhs : (lhs > 1e-9 ? INFINITY : 0.0);
    if (ratio > r_.worst) {
      r_.worst = ratio;
      r_.worst_case = where;
    }
  }

  IdentityResult take() { return std::move(r_); }

 private:
  IdentityResult r_;
};

inline std::string at(u64 q, i64 m, i64 n) {
  return "q=" + std::to_string(q) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
}

// A random multiple of a random divisor of q, so every gcd stratum shows up.
inline i64 stratified(Stream& s, const std::vector<u64>& divs, u64 q) {
  const u64 d = divs[s.below(divs.size())];
  return static_cast<i64>(mul_mod(d, s.below(q), q));
}

// Unit tables for q and its divisors, built once per q.
class Tables {
 public:
  const UnitTable& get(u64 m) {
    auto it = t_.find(m);
    if (it == t_.end()) it = t_.emplace(m, UnitTable(m)).first;
    return it->second;
  }

 private:
  std::map<u64, UnitTable> t_;
};

inline u64 unit_in(Stream& s, u64 q) {
  if (q == 1) return 0;
  u64 c = 1 + s.below(q - 1);
  while (gcd(c, q) != 1) c = c % (q - 1) + 1;
  return c;
}

}  // namespace detail

/// Runs every identity whose module matches the scope over moduli 2..budget.
/// With inject_fault the direct side of the Kloosterman oracle fixture has its
/// sign flipped, which the suite must report.
inline SuiteReport run_identity_suite(const SuiteOptions& opt) {
  using detail::Recorder;
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.options = opt;
  auto in_scope = [&](const char* module) { return opt.scope.empty() || opt.scope == module; };

  Recorder oracle("expsums", "kloosterman fast = direct"), weil("expsums", "weil bound"),
      symmetry("expsums", "symmetry K(m,n) = K(n,m)"), scaling("expsums", "scaling K(cm,n) = K(m,cn)"),
      sk("expsums", "selberg-kuznetsov expansion"), mult("expsums", "twisted multiplicativity"),
      raman("expsums", "ramanujan |c_q(m)| <= gcd(q,m)"), gstar("expsums", "G* mobius expansion"),
      van3("expsums", "vanishing K(pm,1) on prime powers"), van4("expsums", "vanishing for unequal gcds"),
      pull("expsums", "gcd pull-out on prime powers"), roots("expsums", "closed form root invariance"),
      tzero("expsums", "T(x,y,0) = c_q(x-y)"), toracle("expsums", "T fast = direct"),
      jsym("counting", "J_q(a,K) = J_q(-a,K)"), joracle("counting", "J fast = direct"),
      bil("bilinear", "bilinear dft = direct"), mom("moments", "profile dft = direct"),
      div("divisor", "class sums partition the sieve total");

  for (u64 q = 2; q <= opt.budget; ++q) {
    const auto fq = factorize(q);
    const auto divs = fq.divisors();
    const double tol = 1e-6 * static_cast<double>(q);
    Stream s(opt.seed, {fnv1a("suite"), q});
    detail::Tables tabs;

    if (in_scope("expsums")) {
      const auto& tq = tabs.get(q);
      const KloostermanFast kf(fq);
      auto brute = [&](i64 m, i64 n, u64 mod) { return kloosterman_brute(m, n, tabs.get(mod)).value; };
      for (u64 k = 0; k < opt.samples; ++k) {
        const i64 m = detail::stratified(s, divs, q), n = detail::stratified(s, divs, q);
        const std::string where = detail::at(q, m, n);
        cplx kb = kloosterman_brute(m, n, tq).value;
        if (opt.inject_fault && k == 0) kb = -kb + cplx{1, 0};
        oracle.equal(kf(m, n).value, kb, tol, where);
        weil.at_most(std::abs(kb), weil_bound_rhs(m, n, fq), where);
        symmetry.equal(brute(n, m, q), kb, tol, where);
        const i64 c = static_cast<i64>(detail::unit_in(s, q));
        scaling.equal(brute(c * m % static_cast<i64>(q), n, q), brute(m, c * n % static_cast<i64>(q), q), tol,
                      where + " c=" + std::to_string(c));

        // K_q(m,n) = sum over d | (m,n,q) of d K_{q/d}(mn/d^2, 1)
        const u64 g = gcd3(static_cast<u64>(m), static_cast<u64>(n), q);
        cplx rhs = 0;
        for (u64 d : divs) {
          if (g % d != 0) continue;
          const u64 qd = q / d;
          const u64 mn = mul_mod(static_cast<u64>(m) / d % qd, static_cast<u64>(n) / d % qd, qd);
          rhs += static_cast<double>(d) * brute(static_cast<i64>(mn), 1, qd);
        }
        sk.equal(kb, rhs, tol, where);

        if (fq.factors().size() >= 2) {
          const u64 q1 = fq.factors()[0].value(), q2 = q / q1;
          const i64 i2 = static_cast<i64>(mod_inv(static_cast<i64>(q2 % q1), q1));
          const i64 i1 = static_cast<i64>(mod_inv(static_cast<i64>(q1 % q2), q2));
          const cplx prod = brute(i2 * (m % static_cast<i64>(q1)), i2 * (n % static_cast<i64>(q1)), q1) *
                            brute(i1 * (m % static_cast<i64>(q2)), i1 * (n % static_cast<i64>(q2)), q2);
          mult.equal(kb, prod, tol, where);
        }

        const i64 cq = ramanujan(m, fq);
        raman.at_most(static_cast<double>(std::llabs(cq)), static_cast<double>(gcd(static_cast<u64>(m), q) == 0 ? q : gcd(static_cast<u64>(m), q)), where);
        raman.equal(cplx(static_cast<double>(cq), 0), brute(m, 0, q), tol, where);

        gstar.equal(gauss_star_mobius(m, n, fq).value, gauss_star(m, n, q).value, tol, where);
      }

      if (fq.is_prime_power() && fq.factors()[0].j >= 2) {
        const u64 p = fq.factors()[0].p;
        const int j = fq.factors()[0].j;
        for (u64 k = 0; k < opt.samples; ++k) {
          const i64 m1 = static_cast<i64>(p * s.below(q / p));
          van3.deviation(std::abs(brute(m1, 1, q)), tol, detail::at(q, m1, 1));

          i64 m = detail::stratified(s, divs, q), n = detail::stratified(s, divs, q);
          if (m != 0 && n != 0 && gcd(static_cast<u64>(m), q) != gcd(static_cast<u64>(n), q))
            van4.deviation(std::abs(brute(m, n, q)), tol, detail::at(q, m, n));

          const u64 d = divs[s.below(divs.size() - 1)];  // proper divisor
          const u64 qs = q / d;
          const i64 ms = static_cast<i64>(s.below(qs)), ns = static_cast<i64>(detail::unit_in(s, qs));
          pull.equal(brute(ms * static_cast<i64>(d), ns * static_cast<i64>(d), q),
                     static_cast<double>(d) * brute(ms, ns, qs), tol, detail::at(q, ms * static_cast<i64>(d), ns * static_cast<i64>(d)));

          if (p % 2 == 1) {
            const u64 l = detail::unit_in(s, q), nn = detail::unit_in(s, q);
            const u64 mm = mul_mod(mul_mod(l, l, q), nn, q);
            const double v1 = kloosterman_closed_form(static_cast<i64>(nn), p, j, l);
            const double v2 = kloosterman_closed_form(static_cast<i64>(nn), p, j, q - l);
            roots.deviation(std::abs(v1 - v2), tol, detail::at(q, static_cast<i64>(mm), static_cast<i64>(nn)));
            roots.equal(cplx(v1, 0), brute(static_cast<i64>(mm), static_cast<i64>(nn), q), tol,
                        detail::at(q, static_cast<i64>(mm), static_cast<i64>(nn)));
          }
        }
      }

      for (u64 k = 0; k < 4; ++k) {
        const i64 x = detail::stratified(s, divs, q), y = detail::stratified(s, divs, q);
        tzero.equal(t_transform_fast(x, y, 0, fq).value, cplx(static_cast<double>(ramanujan(x - y, fq)), 0),
                    1e-6 * std::pow(static_cast<double>(q), 1.5), detail::at(q, x, y));
      }
      if (q <= 120) {
        for (u64 k = 0; k < 2; ++k) {
          const i64 x = detail::stratified(s, divs, q), y = detail::stratified(s, divs, q),
                    z = static_cast<i64>(s.below(q));
          toracle.equal(t_transform_fast(x, y, z, fq).value, t_transform_brute(x, y, z, kf).value,
                        1e-6 * std::pow(static_cast<double>(q), 1.5),
                        detail::at(q, x, y) + " z=" + std::to_string(z));
        }
      }
    }

    if (in_scope("counting")) {
      const u64 K = 1 + s.below(q);
      JCounter jc(q);
      for (u64 k = 0; k < 4; ++k) {
        const i64 a = static_cast<i64>(s.below(q));
        const u64 j1 = jc.count(a, K), j2 = jc.count(-a, K);
        const std::string where = "q=" + std::to_string(q) + " a=" + std::to_string(a) + " K=" + std::to_string(K);
        jsym.deviation(static_cast<double>(j1 > j2 ? j1 - j2 : j2 - j1), 0, where);
        if (q <= 300) {
          const u64 b = j_count_brute(CountQuery{fq, a, K, {}, {}});
          joracle.deviation(static_cast<double>(j1 > b ? j1 - b : b - j1), 0, where);
        }
      }
    }

    if (in_scope("bilinear") && q <= 400 && q % 7 == 0) {
      const u64 M = 1 + s.below(q), N = 1 + s.below(q);
      std::vector<cplx> av, bv;
      for (u64 i = 0; i < M; ++i) av.emplace_back(s.coin() ? 1.0 : -1.0, 0.0);
      for (u64 i = 0; i < N; ++i) bv.emplace_back(s.coin() ? 1.0 : -1.0, 0.0);
      const Interval J{static_cast<i64>(s.below(q)), static_cast<i64>(N)};
      const auto al = WeightVector::on_interval({static_cast<i64>(s.below(q)), static_cast<i64>(M)}, std::move(av));
      const auto be = WeightVector::on_interval(J, std::move(bv));
      const i64 a = detail::stratified(s, divs, q);
      const double btol = 1e-6 * static_cast<double>(M * N) * std::sqrt(static_cast<double>(q));
      const std::string where = "q=" + std::to_string(q) + " M=" + std::to_string(M) + " N=" + std::to_string(N);
      bil.equal(type2_sum(al, be, a, fq, Path::Dft).value, type2_sum(al, be, a, fq, Path::Direct).value, btol, where);
      bil.equal(cor22_sum(al, J, a, fq, Path::Dft).value, cor22_sum(al, J, a, fq, Path::Direct).value, btol, where);
    }

    if (in_scope("moments") && q <= 400 && is_prime(q)) {
      const u64 N = 1 + s.below(q - 1);
      const Interval J{static_cast<i64>(s.below(q - N)), static_cast<i64>(N)};
      const auto fast = m_profile(q, J), slow = m_profile_direct(q, J);
      double dev = 0;
      for (std::size_t l = 0; l < fast.values.size(); ++l) dev = std::max(dev, std::abs(fast.values[l] - slow.values[l]));
      mom.deviation(dev, 1e-6 * static_cast<double>(q * N), "p=" + std::to_string(q) + " N=" + std::to_string(N));
    }

    if (in_scope("divisor") && q % 50 == 1) {
      const u64 X = 100 * q;
      const auto tau = tau_sieve(X);
      u64 total = 0, parts = 0;
      for (u64 n = 1; n <= X; ++n) total += tau[n];
      for (u64 v : class_sums(tau, X, q)) parts += v;
      div.deviation(static_cast<double>(total > parts ? total - parts : parts - total), 0,
                    "X=" + std::to_string(X) + " q=" + std::to_string(q));
    }
  }

  for (Recorder* r : {&oracle, &weil, &symmetry, &scaling, &sk, &mult, &raman, &gstar, &van3, &van4, &pull, &roots,
                      &tzero, &toracle, &jsym, &joracle, &bil, &mom, &div}) {
    auto res = r->take();
    if (in_scope(res.module.c_str())) rep.results.push_back(std::move(res));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline nlohmann::json to_json(const SuiteReport& rep) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["budget"] = rep.options.budget;
  j["scope"] = rep.options.scope.empty() ? "all" : rep.options.scope;
  j["seed"] = rep.options.seed;
  j["inject_fault"] = rep.options.inject_fault;
  j["pass"] = rep.pass();
  auto& arr = j["identities"] = nlohmann::json::array();
  for (const auto& r : rep.results)
    arr.push_back({{"name", r.name},
                   {"module", r.module},
                   {"checks", r.checks},
                   {"failures", r.failures},
                   {"worst", r.worst},
                   {"worst_case", r.worst_case},
                   {"pass", r.pass()}});
  return j;
}

}  // namespace ksum::harness
