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

// Work-queue evaluation of grid points and the fixed calibration grids.

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "ksum/harness/calibration.hpp"
#include "ksum/harness/records.hpp"
#include "ksum/harness/targets.hpp"

namespace ksum::harness {

/// Evaluates every point on `workers` threads. Each result lands in its own
/// slot, so the output does not depend on scheduling.
inline std::vector<Evaluation> evaluate_all(const std::vector<Point>& pts, double eps, u64 seed, unsigned workers,
                                            SieveCache& sieves) {
  std::vector<Evaluation> out(pts.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pts.size()) return;
      try {
        out[i] = evaluate_point(pts[i], eps, seed, sieves);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure) failure = std::current_exception();
        next.store(pts.size());
        return;
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Records for a sweep over `targets`, sorted by parameter tuple.
inline std::vector<RatioRecord> run_targets(const std::vector<std::string>& targets, const Grid& grid, double eps,
                                            u64 seed, unsigned workers, const CalibrationFile& calib) {
  std::map<std::string, double> constants;
  for (const auto& t : targets) {
    if (!parse_target(t)) throw BadInput("unknown target " + t);
    const auto& e = calib.require(t);
    if (std::abs(e.epsilon - eps) > 1e-12)
      throw Error("calibration for " + t + " was fitted at epsilon " + fmt_double(e.epsilon));
    constants[t] = e.constant;
  }
  std::vector<Point> pts;
  for (const auto& t : targets) {
    auto p = generate_points(t, grid, seed);
    pts.insert(pts.end(), p.begin(), p.end());
  }
  SieveCache sieves;
  const auto evs = evaluate_all(pts, eps, seed, workers, sieves);
  std::vector<RatioRecord> recs;
  recs.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) recs.push_back(make_record(pts[i], evs[i], constants[pts[i].target]));
  sort_records(recs);
  return recs;
}

/// The grid a theorem target is fitted on: every modulus stays <= cap.
inline Grid calibration_grid(const std::string& target, u64 cap) {
  const auto info = parse_target(target);
  if (!info) throw BadInput("unknown target " + target);
  Grid g;
  const std::vector<u64> composite = {12, 36, 60, 64, 100, 120, 125, 210, 243, 256, 343, 360, 420, 480};
  const std::vector<u64> primes = {31, 61, 97, 127, 211, 257, 331, 401, 499};
  std::vector<double> e;
  for (int i = 0; i <= 8; ++i) e.push_back(i / 8.0);
  e.push_back(1.0 / 3.0);
  e.push_back(0.4);
  for (double mu : e)
    for (double nu : e) g.exponents.emplace_back(mu, nu);
  g.weights = {"rademacher", "ones", "phase"};
  g.replicates = 2;
  auto keep = [&](const std::vector<u64>& v) {
    for (u64 q : v)
      if (q <= cap) g.moduli.push_back(q);
  };
  switch (info->family) {
    case Family::TypeI:
    case Family::Product:
    case Family::Trivial:
    case Family::PV:
      keep(primes);
      keep(composite);
      g.a = {1, 2, 3, 6, 10, 0};
      break;
    case Family::W:
      keep(primes);
      keep(composite);
      g.a = {1, 7};
      g.divisors_per_q = 4;
      break;
    case Family::WSharp1:
    case Family::WSharp2:
    case Family::SSharp1:
    case Family::SSharp2:
      keep(primes);
      g.a = {1, 5};
      g.replicates = 3;
      break;
    case Family::Moments:
      keep(primes);
      g.exponents.clear();
      g.q_exponents = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.67, 0.75};
      g.alpha_points = 7;
      g.replicates = 3;
      break;
    case Family::Divisor:
      g.exponents.clear();
      for (u64 X : {1000, 2000, 3000, 5000, 7000, 10000, 11000})
        if (std::pow(static_cast<double>(X), 0.62) <= static_cast<double>(cap)) g.X.push_back(X);
      g.q_exponents = {0.55, 0.6, 0.62, 0.64, 2.0 / 3.0};
      g.family_exponents = {0.3, 0.35, 0.4, 0.45, 0.5, 0.6, 0.7, 0.8, 0.9};
      g.replicates = 4;
      break;
    case Family::SelbergHooley:
      g.exponents.clear();
      g.X = {2000, 5000, 10000, 20000, 50000};
      g.q_exponents = {0.3, 0.4, 0.5, 0.55, 0.6};
      g.a = {1, 2, 3, 5, 7, 11, 13};
      break;
  }
  return g;
}

struct Fit {
  double max_ratio = 0;
  u64 samples = 0;
};

/// Largest lhs / rhs over the calibration grid of a theorem target. Divisor
/// targets derive q from X, so points above the cap are dropped here.
inline Fit fit_theorem(const std::string& target, u64 cap, double eps, u64 seed, unsigned workers) {
  auto pts = generate_points(target, calibration_grid(target, cap), seed);
  std::erase_if(pts, [&](const Point& p) { return p.q > cap; });
  SieveCache sieves;
  const auto evs = evaluate_all(pts, eps, seed, workers, sieves);
  Fit f;
  for (const auto& e : evs) {
    if (e.skip || !(e.rhs_unit > 0)) continue;
    ++f.samples;
    f.max_ratio = std::max(f.max_ratio, e.lhs / e.rhs_unit);
  }
  return f;
}

}  // namespace ksum::harness
