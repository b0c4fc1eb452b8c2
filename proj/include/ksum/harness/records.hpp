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

// One row per evaluated grid point, and the CSV / JSON report writers.

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "ksum/modarith.hpp"

namespace ksum::harness {

inline constexpr int kReportSchemaVersion = 1;

struct RatioRecord {
  std::string target;
  u64 q = 0;
  u64 M = 0;
  u64 N = 0;
  u64 K = 0;
  u64 r = 0;
  i64 c = 0;
  i64 a = 0;
  u64 X = 0;
  double alpha = 0;
  std::string variant;
  std::string weights;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  std::string status = "ok";  // ok | violated | skipped
  std::string reason;

  auto key() const { return std::tie(target, q, M, N, K, r, c, a, X, alpha, variant, weights); }

  /// Sets ratio and status from lhs and rhs.
  void settle() {
    ratio = rhs > 0 ? lhs / rhs : 0.0;
    status = ratio > 1.0 ? "violated" : "ok";
  }

  void skip(std::string why) {
    lhs = rhs = ratio = 0;
    status = "skipped";
    reason = std::move(why);
  }
};

/// Sorted by parameter tuple; ties keep grid order.
inline void sort_records(std::vector<RatioRecord>& recs) {
  std::stable_sort(recs.begin(), recs.end(), [](const RatioRecord& x, const RatioRecord& y) { return x.key() < y.key(); });
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline const char* kCsvHeader = "target,q,M,N,K,r,c,a,X,alpha,variant,weights,lhs,rhs,ratio,status,reason";

inline void write_csv(std::ostream& os, const std::vector<RatioRecord>& recs) {
  os << kCsvHeader << '\n';
  for (const auto& r : recs) {
    os << csv_field(r.target) << ',' << r.q << ',' << r.M << ',' << r.N << ',' << r.K << ',' << r.r << ',' << r.c
       << ',' << r.a << ',' << r.X << ',' << fmt_double(r.alpha) << ',' << csv_field(r.variant) << ','
       << csv_field(r.weights) << ',' << fmt_double(r.lhs) << ',' << fmt_double(r.rhs) << ','
       << fmt_double(r.ratio) << ',' << r.status << ',' << csv_field(r.reason) << '\n';
  }
}

struct TargetSummary {
  u64 count = 0, ok = 0, violated = 0, skipped = 0;
  double max_ratio = 0;
};

inline std::map<std::string, TargetSummary> summarize(const std::vector<RatioRecord>& recs) {
  std::map<std::string, TargetSummary> out;
  for (const auto& r : recs) {
    auto& s = out[r.target];
    ++s.count;
    if (r.status == "ok") ++s.ok;
    if (r.status == "violated") ++s.violated;
    if (r.status == "skipped") ++s.skipped;
    if (r.status != "skipped") s.max_ratio = std::max(s.max_ratio, r.ratio);
  }
  return out;
}

inline nlohmann::json to_json(const RatioRecord& r) {
  return {{"target", r.target}, {"q", r.q},           {"M", r.M},         {"N", r.N},
          {"K", r.K},           {"r", r.r},           {"c", r.c},         {"a", r.a},
          {"X", r.X},           {"alpha", r.alpha},   {"variant", r.variant}, {"weights", r.weights},
          {"lhs", r.lhs},       {"rhs", r.rhs},       {"ratio", r.ratio}, {"status", r.status},
          {"reason", r.reason}};
}

inline nlohmann::json report_json(const std::vector<RatioRecord>& recs, const nlohmann::json& config) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config;
  j["records"] = nlohmann::json::array();
  for (const auto& r : recs) j["records"].push_back(to_json(r));
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& [t, s] : summarize(recs))
    summary[t] = {{"count", s.count}, {"ok", s.ok}, {"violated", s.violated}, {"skipped", s.skipped},
                  {"max_ratio", s.max_ratio}};
  j["summary"] = summary;
  return j;
}

}  // namespace ksum::harness
