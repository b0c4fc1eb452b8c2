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

// Sweep configuration files (YAML). Unknown keys are rejected so a typo never
// silently shrinks a grid.

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "ksum/errors.hpp"
#include "ksum/harness/targets.hpp"

namespace ksum::harness {

struct SweepConfig {
  std::vector<std::string> targets;
  double epsilon = 0.05;
  u64 seed = 1;
  unsigned workers = 1;
  Grid grid;
};

namespace detail {

inline void only_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
  if (!n.IsMap()) throw BadInput(where + " must be a mapping");
  for (const auto& kv : n) {
    const auto k = kv.first.as<std::string>();
    if (!allowed.count(k)) throw BadInput("unknown key '" + k + "' in " + where);
  }
}

template <class T>
std::vector<T> list_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) throw BadInput(key + " must be a list");
  std::vector<T> out;
  for (const auto& v : n) out.push_back(v.as<T>());
  return out;
}

}  // namespace detail

inline SweepConfig parse_config(const YAML::Node& root) {
  SweepConfig c;
  try {
    detail::only_keys(root, {"targets", "epsilon", "seed", "workers", "weights", "grid"}, "config");
    if (!root["targets"]) throw BadInput("config needs a targets list");
    for (auto& t : detail::list_of<std::string>(root["targets"], "targets")) {
      if (t == "all") {
        for (const auto& x : theorem_targets()) c.targets.push_back(x);
      } else {
        if (!parse_target(t)) throw BadInput("unknown target " + t);
        c.targets.push_back(t);
      }
    }
    if (root["epsilon"]) c.epsilon = root["epsilon"].as<double>();
    if (root["seed"]) c.seed = root["seed"].as<u64>();
    if (root["workers"]) c.workers = root["workers"].as<unsigned>();
    if (c.workers == 0) throw BadInput("workers must be positive");
    if (root["weights"]) c.grid.weights = detail::list_of<std::string>(root["weights"], "weights");
    for (const auto& w : c.grid.weights)
      if (w != "rademacher" && w != "ones" && w != "phase") throw BadInput("unknown weight scheme " + w);

    if (const auto g = root["grid"]) {
      detail::only_keys(g,
                        {"moduli", "prime_near", "exponents", "a", "divisors_per_q", "X", "q_exponents",
                         "family_exponents", "alpha_points", "replicates"},
                        "grid");
      auto& G = c.grid;
      if (g["moduli"]) G.moduli = detail::list_of<u64>(g["moduli"], "moduli");
      if (g["prime_near"]) G.prime_near = detail::list_of<u64>(g["prime_near"], "prime_near");
      if (g["exponents"]) {
        if (!g["exponents"].IsSequence()) throw BadInput("exponents must be a list of [mu, nu] pairs");
        for (const auto& e : g["exponents"]) {
          if (!e.IsSequence() || e.size() != 2) throw BadInput("exponents must be a list of [mu, nu] pairs");
          G.exponents.emplace_back(e[0].as<double>(), e[1].as<double>());
        }
      }
      if (g["a"]) G.a = detail::list_of<i64>(g["a"], "a");
      if (g["divisors_per_q"]) G.divisors_per_q = g["divisors_per_q"].as<u64>();
      if (g["X"]) G.X = detail::list_of<u64>(g["X"], "X");
      if (g["q_exponents"]) G.q_exponents = detail::list_of<double>(g["q_exponents"], "q_exponents");
      if (g["family_exponents"]) G.family_exponents = detail::list_of<double>(g["family_exponents"], "family_exponents");
      if (g["alpha_points"]) G.alpha_points = g["alpha_points"].as<u64>();
      if (g["replicates"]) G.replicates = g["replicates"].as<u64>();
      for (const auto& [mu, nu] : G.exponents)
        if (mu < 0 || mu > 1 || nu < 0 || nu > 1) throw BadInput("exponents must lie in [0, 1]");
    }
  } catch (const YAML::Exception& e) {
    throw BadInput(std::string("bad config: ") + e.what());
  }
  return c;
}

inline SweepConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw Error("cannot read config " + path);
  } catch (const YAML::Exception& e) {
    throw BadInput("cannot parse config " + path + ": " + e.what());
  }
  return parse_config(root);
}

/// Echo of the effective config for the report header.
inline nlohmann::json to_json(const SweepConfig& c) {
  const auto& g = c.grid;
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& [mu, nu] : g.exponents) ex.push_back({mu, nu});
  return {{"targets", c.targets},
          {"epsilon", c.epsilon},
          {"seed", c.seed},
          {"weights", g.weights},
          {"grid",
           {{"moduli", g.moduli},
            {"prime_near", g.prime_near},
            {"exponents", ex},
            {"a", g.a},
            {"divisors_per_q", g.divisors_per_q},
            {"X", g.X},
            {"q_exponents", g.q_exponents},
            {"family_exponents", g.family_exponents},
            {"alpha_points", g.alpha_points},
            {"replicates", g.replicates}}}};
}

}  // namespace ksum::harness
