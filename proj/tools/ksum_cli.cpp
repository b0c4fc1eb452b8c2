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

// ksum: command line front end for the exponential sum toolkit.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ksum/bilinear.hpp"
#include "ksum/counting.hpp"
#include "ksum/divisor.hpp"
#include "ksum/expsums.hpp"
#include "ksum/harness/calibration.hpp"
#include "ksum/harness/config.hpp"
#include "ksum/harness/lemmas.hpp"
#include "ksum/harness/records.hpp"
#include "ksum/harness/suite.hpp"
#include "ksum/harness/sweep.hpp"
#include "ksum/moments.hpp"

namespace {

using namespace ksum;
using namespace ksum::harness;
using nlohmann::json;

json sum_json(const SumValue& v) {
  return {{"re", v.value.real()}, {"im", v.value.imag()}, {"abs", v.abs()},
          {"method", std::string(to_string(v.method))}, {"terms", v.terms}};
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string today() {
  const std::time_t t = std::time(nullptr);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", std::gmtime(&t));
  return buf;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string kind;
  i64 m = 0, n = 0, x = 0, y = 0, z = 0;
  u64 q = 0;
  bool brute = false, fast = false, both = false;
};

int run_eval(const EvalArgs& a) {
  const auto fq = factorize(a.q);
  const bool want_brute = a.brute || a.both || !a.fast;
  const bool want_fast = a.fast || a.both || !a.brute;
  json out{{"kind", a.kind}, {"q", a.q}};
  std::optional<SumValue> b, f;
  if (a.kind == "kloosterman") {
    out["m"] = a.m, out["n"] = a.n;
    if (want_brute) b = kloosterman_brute(a.m, a.n, fq);
    if (want_fast) f = kloosterman_fast(a.m, a.n, fq);
    out["weil_bound"] = weil_bound_rhs(a.m, a.n, fq);
  } else if (a.kind == "salie") {
    out["m"] = a.m, out["n"] = a.n;
    b = salie(a.m, a.n, fq);  // direct summation is the only route
  } else if (a.kind == "gauss") {
    out["m"] = a.m, out["n"] = a.n;
    out["G"] = sum_json(gauss(a.m, a.n, a.q));
    if (want_brute) b = gauss_star(a.m, a.n, a.q);
    if (want_fast) f = gauss_star_mobius(a.m, a.n, fq);
  } else if (a.kind == "ramanujan") {
    out["m"] = a.m;
    const i64 c = ramanujan(a.m, fq);
    if (want_fast) f = SumValue{cplx(static_cast<double>(c), 0), Method::ClosedForm, fq.divisor_count()};
    if (want_brute) b = kloosterman_brute(a.m, 0, fq);
  } else if (a.kind == "t") {
    out["x"] = a.x, out["y"] = a.y, out["z"] = a.z;
    if (want_brute) b = t_transform_brute(a.x, a.y, a.z, fq);
    if (want_fast) f = t_transform_fast(a.x, a.y, a.z, fq);
    out["bound_shape"] = t_bound_rhs(a.x, a.y, a.z, fq);
  } else {
    throw BadInput("unknown sum " + a.kind);
  }
  if (b) out["brute"] = sum_json(*b);
  if (f) out["fast"] = sum_json(*f);
  if (b && f) out["difference"] = std::abs(b->value - f->value);
  print(out);
  return 0;
}

// ---- count ------------------------------------------------------------------

struct CountArgs {
  u64 q = 0;
  i64 a = 0;
  u64 K = 1;
  std::optional<u64> r;
  std::optional<i64> c;
  bool brute = false;
};

int run_count(const CountArgs& a) {
  CountQuery qr{factorize(a.q), a.a, a.K, a.r, a.c};
  qr.validate();
  json out{{"q", a.q}, {"a", a.a}, {"K", a.K}};
  if (qr.r) {
    out["r"] = *qr.r, out["c"] = *qr.c;
    out["J_restricted"] = j_count_restricted(qr);
    out["ceiling"] = j_restricted_ceiling(qr);
  } else {
    out["J"] = j_count_fast(qr);
    if (a.brute) out["J_brute"] = j_count_brute(qr);
    out["shape_hb"] = bound_j_hb(a.q, a.a, a.K);
    out["shape_new"] = bound_j_new(a.q, a.a, a.K);
  }
  print(out);
  return 0;
}

// ---- suite ------------------------------------------------------------------

int run_suite(const SuiteOptions& o, const std::string& out_path) {
  if (o.budget < 2) {
    // nothing to check below the smallest modulus
    SuiteReport empty;
    empty.options = o;
    print(to_json(empty));
    return 0;
  }
  const auto rep = run_identity_suite(o);
  const auto j = to_json(rep);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot write " + out_path);
    f << j.dump(2) << '\n';
  }
  for (const auto& r : rep.results)
    std::cerr << (r.pass() ? "pass " : "FAIL ") << r.module << ": " << r.name << " (" << r.checks << " checks, worst "
              << fmt_double(r.worst) << (r.worst_case.empty() ? "" : " at " + r.worst_case) << ")\n";
  if (out_path.empty()) print(j);
  return rep.pass() ? 0 : 1;
}

// ---- calibrate --------------------------------------------------------------

struct CalibrateArgs {
  std::vector<std::string> targets;
  u64 cap = 500;
  std::string out = "data/calibration.json";
  u64 seed = 1;
  double epsilon = 0.05;
  std::string date;
  unsigned workers = 1;
};

int run_calibrate(const CalibrateArgs& a) {
  if (a.cap > kMaxCalibrationCap)
    throw BadInput("cap " + std::to_string(a.cap) + " exceeds the limit " + std::to_string(kMaxCalibrationCap));
  if (a.cap < 2) throw BadInput("cap must be at least 2");
  std::vector<std::string> targets;
  for (const auto& t : a.targets) {
    if (t == "all") {
      targets.insert(targets.end(), theorem_targets().begin(), theorem_targets().end());
      targets.insert(targets.end(), lemma_targets().begin(), lemma_targets().end());
    } else if (parse_target(t) || is_lemma_target(t)) {
      targets.push_back(t);
    } else {
      throw BadInput("unknown target " + t);
    }
  }
  auto file = CalibrationFile::load(a.out);
  const std::string date = a.date.empty() ? today() : a.date;
  for (const auto& t : targets) {
    const auto t0 = std::chrono::steady_clock::now();
    const Fit f = is_lemma_target(t) ? fit_lemma(t, a.cap, a.epsilon, a.seed)
                                     : fit_theorem(t, a.cap, a.epsilon, a.seed, a.workers);
    CalibrationEntry e;
    e.target = t;
    e.epsilon = a.epsilon;
    e.constant = pow2_ceiling(f.max_ratio);
    e.cap = a.cap;
    e.seed = a.seed;
    e.date = date;
    e.max_ratio = f.max_ratio;
    e.samples = f.samples;
    file.put(e);
    std::cerr << t << ": max ratio " << fmt_double(f.max_ratio) << " over " << f.samples << " samples, constant "
              << e.constant << " ("
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << "s)\n";
  }
  const auto parent = std::filesystem::path(a.out).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  file.save(a.out);
  return 0;
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::optional<u64> seed;
  std::optional<unsigned> workers;
  std::string out = "out";
  std::string calibration = "data/calibration.json";
};

int run_sweep(const SweepArgs& a) {
  auto cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.workers) cfg.workers = *a.workers;
  if (cfg.workers == 0) throw BadInput("workers must be positive");
  const auto calib = CalibrationFile::load(a.calibration);
  const auto recs = run_targets(cfg.targets, cfg.grid, cfg.epsilon, cfg.seed, cfg.workers, calib);
  std::filesystem::create_directories(a.out);
  {
    std::ofstream csv(std::filesystem::path(a.out) / "report.csv", std::ios::binary);
    if (!csv) throw Error("cannot write report.csv in " + a.out);
    write_csv(csv, recs);
  }
  {
    std::ofstream js(std::filesystem::path(a.out) / "report.json", std::ios::binary);
    if (!js) throw Error("cannot write report.json in " + a.out);
    js << report_json(recs, to_json(cfg)).dump(2) << '\n';
  }
  bool violated = false;
  for (const auto& [t, s] : summarize(recs)) {
    std::cerr << t << ": " << s.count << " records, " << s.ok << " ok, " << s.violated << " violated, " << s.skipped
              << " skipped, max ratio " << fmt_double(s.max_ratio) << '\n';
    violated = violated || s.violated > 0;
  }
  return violated ? 1 : 0;
}

// ---- moments ----------------------------------------------------------------

struct MomentArgs {
  u64 p_min = 101, p_max = 101;
  double n_exp = 0.5;
  i64 offset = 0;
  int r = 2;
  std::vector<double> alpha = {1.0};
  std::string calibration;
};

int run_moments(const MomentArgs& a) {
  std::optional<CalibrationFile> calib;
  if (!a.calibration.empty()) calib = CalibrationFile::load(a.calibration);
  json rows = json::array();
  for (u64 p = next_prime(std::max<u64>(a.p_min, 3)); p <= a.p_max; p = next_prime(p + 1)) {
    const u64 N = std::min(p - 1, ceil_pow(p, a.n_exp));
    const Interval J{reduce(a.offset, p) + N >= p ? static_cast<i64>(p - 1 - N) : static_cast<i64>(reduce(a.offset, p)),
                     static_cast<i64>(N)};
    const auto prof = m_profile(p, J);
    for (double al : a.alpha) {
      json row{{"p", p}, {"N", N}, {"offset", J.offset}, {"r", a.r}, {"alpha", al}, {"moment", moment(prof, al)},
               {"holder_rhs", holder_rhs(prof, a.r, al)}};
      if (auto bad = thm32_precondition(p, N, a.r, al)) {
        row["skipped"] = *bad;
      } else if (calib) {
        const auto& e = calib->require("thm3.2/r" + std::to_string(a.r));
        row["rhs"] = thm32_rhs(p, N, a.r, al, e.epsilon, e.constant);
      }
      rows.push_back(row);
    }
    rows.back()["full_second_moment"] = full_second_moment(prof);
    rows.back()["full_second_moment_exact"] = full_second_moment_exact(p, N);
  }
  print(rows);
  return 0;
}

// ---- divisor ----------------------------------------------------------------

struct DivisorArgs {
  u64 X = 0, q = 0;
  std::optional<i64> a;
  std::optional<u64> A;
  i64 offset = 0;
};

int run_divisor(const DivisorArgs& d) {
  if (d.a.has_value() == d.A.has_value()) throw BadInput("give exactly one of --a and --A");
  if (d.X > kSieveCap) throw TooLarge("X above the sieve cap");
  const auto fq = factorize(d.q);
  const auto tau = tau_sieve(d.X);
  json out{{"X", d.X}, {"q", d.q}, {"main_term", main_term(d.X, fq)}};
  if (d.a) {
    out["a"] = *d.a;
    out["S"] = divisor_sum_ap(tau, d.X, *d.a, fq);
    out["error"] = error_term(tau, d.X, *d.a, fq);
    out["selberg_hooley_scale"] = selberg_hooley_rhs(d.X, d.q);
  } else {
    const Interval I{d.offset, static_cast<i64>(*d.A)};
    out["A"] = *d.A;
    out["offset"] = d.offset;
    out["family_error"] = family_error(tau, d.X, I, fq);
    out["shape"] = family_error_shape(d.X, *d.A, d.q);
    if (auto bad = thm33_precondition(d.X, *d.A, d.q)) out["skipped"] = *bad;
  }
  print(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ksum: Kloosterman sums, bilinear forms and their bounds"};
  app.require_subcommand(1);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "evaluate one complete exponential sum");
  eval->add_option("kind", ev.kind, "kloosterman | salie | gauss | ramanujan | t")
      ->required()
      ->check(CLI::IsMember({"kloosterman", "salie", "gauss", "ramanujan", "t"}));
  eval->add_option("--m,-m", ev.m);
  eval->add_option("--n,-n", ev.n);
  eval->add_option("--x,-x", ev.x);
  eval->add_option("--y,-y", ev.y);
  eval->add_option("--z,-z", ev.z);
  eval->add_option("--q,-q", ev.q, "modulus")->required()->check(CLI::Range(u64{1}, (u64{1} << 40)));
  eval->add_flag("--brute", ev.brute, "direct summation only");
  eval->add_flag("--fast", ev.fast, "fast route only");
  eval->add_flag("--both", ev.both, "both routes and their difference (default)");

  CountArgs ca;
  std::string count_kind;
  auto* count = app.add_subcommand("count", "exact counting functions");
  count->add_option("kind", count_kind, "j")->required()->check(CLI::IsMember({"j"}));
  count->add_option("--q,-q", ca.q)->required()->check(CLI::Range(u64{1}, u64{1} << 32));
  count->add_option("--a,-a", ca.a);
  count->add_option("--K,-K", ca.K)->required();
  count->add_option("--r,-r", ca.r, "divisor of q for the restricted count");
  count->add_option("--c,-c", ca.c, "unit mod r for the restricted count");
  count->add_flag("--brute", ca.brute, "also run the double loop");

  SuiteOptions so;
  std::string suite_out;
  auto* suite = app.add_subcommand("suite", "run the identity suite over moduli up to a budget");
  suite->add_option("--budget", so.budget, "largest modulus")->capture_default_str();
  suite->add_option("--scope", so.scope, "only this module")
      ->check(CLI::IsMember({"", "expsums", "counting", "bilinear", "moments", "divisor"}));
  suite->add_option("--seed", so.seed)->capture_default_str();
  suite->add_option("--samples", so.samples, "(m, n) pairs per modulus")->capture_default_str();
  suite->add_flag("--inject-fault", so.inject_fault, "flip a sign in the oracle fixture (self-test)");
  suite->add_option("--out", suite_out, "write the JSON report here");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "fit constants and write calibration entries");
  calibrate->add_option("--target", cal.targets, "target name, repeatable, or all")->required();
  calibrate->add_option("--cap", cal.cap, "largest modulus in the fit")->capture_default_str();
  calibrate->add_option("--out", cal.out, "calibration file")->capture_default_str();
  calibrate->add_option("--seed", cal.seed)->capture_default_str();
  calibrate->add_option("--epsilon", cal.epsilon)->capture_default_str()->check(CLI::Range(0.0, 0.25));
  calibrate->add_option("--date", cal.date, "date stamp (default: today, UTC)");
  calibrate->add_option("--workers", cal.workers)->capture_default_str()->check(CLI::PositiveNumber);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "evaluate a grid against calibrated bounds");
  sweep->add_option("--config", sw.config, "YAML sweep config")->required();
  sweep->add_option("--seed", sw.seed, "overrides the config seed");
  sweep->add_option("--workers", sw.workers, "overrides the config worker count");
  sweep->add_option("--out", sw.out, "output directory")->capture_default_str();
  sweep->add_option("--calibration", sw.calibration)->capture_default_str();

  MomentArgs ma;
  auto* moments = app.add_subcommand("moments", "moments of short Kloosterman averages");
  moments->add_option("--p-min", ma.p_min)->capture_default_str();
  moments->add_option("--p-max", ma.p_max)->capture_default_str();
  moments->add_option("--n-exp", ma.n_exp, "N = ceil(p^e)")->capture_default_str();
  moments->add_option("--offset", ma.offset)->capture_default_str();
  moments->add_option("--r", ma.r)->capture_default_str()->check(CLI::PositiveNumber);
  moments->add_option("--alpha", ma.alpha)->capture_default_str();
  moments->add_option("--calibration", ma.calibration, "add calibrated right sides from this file");

  DivisorArgs da;
  auto* divisor = app.add_subcommand("divisor", "divisor function in progressions");
  divisor->add_option("--X", da.X)->required();
  divisor->add_option("--q", da.q)->required()->check(CLI::PositiveNumber);
  divisor->add_option("--a", da.a, "single residue");
  divisor->add_option("--A", da.A, "family of residues offset+1..offset+A");
  divisor->add_option("--offset", da.offset)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return run_eval(ev);
    if (*count) return run_count(ca);
    if (*suite) return run_suite(so, suite_out);
    if (*calibrate) return run_calibrate(cal);
    if (*sweep) return run_sweep(sw);
    if (*moments) return run_moments(ma);
    if (*divisor) return run_divisor(da);
  } catch (const ksum::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
