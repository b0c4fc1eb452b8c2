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

// The calibration file: one fitted constant per bound target, stored with the
// epsilon and modulus cap it was fitted at.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ksum/errors.hpp"
#include "ksum/modarith.hpp"

namespace ksum::harness {

inline constexpr int kCalibrationSchemaVersion = 1;
inline constexpr u64 kMaxCalibrationCap = 2000;

struct CalibrationEntry {
  std::string target;
  double epsilon = 0.05;
  double constant = 1.0;
  u64 cap = 500;
  u64 seed = 0;
  std::string date;
  double max_ratio = 0;
  u64 samples = 0;
};

/// Smallest power of two >= x, and never below 1.
inline double pow2_ceiling(double x) {
  if (!(x > 1.0)) return 1.0;
  return std::exp2(std::ceil(std::log2(x)));
}

inline nlohmann::json to_json(const CalibrationEntry& e) {
  return {{"target", e.target},   {"epsilon", e.epsilon}, {"constant", e.constant}, {"cap", e.cap},
          {"seed", e.seed},       {"date", e.date},       {"max_ratio", e.max_ratio}, {"samples", e.samples}};
}

inline CalibrationEntry entry_from_json(const nlohmann::json& j) {
  CalibrationEntry e;
  e.target = j.at("target").get<std::string>();
  e.epsilon = j.at("epsilon").get<double>();
  e.constant = j.at("constant").get<double>();
  e.cap = j.at("cap").get<u64>();
  e.seed = j.at("seed").get<u64>();
  e.date = j.at("date").get<std::string>();
  e.max_ratio = j.at("max_ratio").get<double>();
  e.samples = j.value("samples", u64{0});
  return e;
}

class CalibrationFile {
 public:
  /// A missing file is an empty calibration.
  static CalibrationFile load(const std::string& path) {
    CalibrationFile f;
    std::ifstream in(path);
    if (!in) return f;
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw BadInput("cannot parse calibration file " + path + ": " + e.what());
    }
    if (j.value("schema_version", 0) != kCalibrationSchemaVersion)
      throw BadInput("unsupported calibration schema in " + path);
    for (auto& [k, v] : j.at("entries").items()) f.entries_[k] = entry_from_json(v);
    return f;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << dump() << '\n';
  }

  std::string dump() const {
    nlohmann::json j;
    j["schema_version"] = kCalibrationSchemaVersion;
    j["entries"] = nlohmann::json::object();
    for (const auto& [k, e] : entries_) j["entries"][k] = to_json(e);
    return j.dump(2);
  }

  void put(const CalibrationEntry& e) { entries_[e.target] = e; }

  std::optional<CalibrationEntry> find(const std::string& target) const {
    auto it = entries_.find(target);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const CalibrationEntry& require(const std::string& target) const {
    auto it = entries_.find(target);
    if (it == entries_.end()) throw Error("missing calibration for target " + target);
    return it->second;
  }

  const std::map<std::string, CalibrationEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, CalibrationEntry> entries_;
};

}  // namespace ksum::harness
