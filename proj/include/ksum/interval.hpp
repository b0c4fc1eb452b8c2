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

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "ksum/errors.hpp"
#include "ksum/modarith.hpp"

namespace ksum {

using cplx = std::complex<double>;

/// The block {offset+1, ..., offset+length} of consecutive integers.
struct Interval {
  i64 offset = 0;
  i64 length = 1;

  i64 first() const { return offset + 1; }
  i64 last() const { return offset + length; }
  i64 at(i64 i) const { return offset + 1 + i; }

  /// True when some element is divisible by m.
  bool contains_multiple_of(u64 m) const {
    if (length >= static_cast<i64>(m)) return true;
    const u64 r = reduce(first(), m);
    return r == 0 || r + static_cast<u64>(length) > m;
  }
};

/// Complex coefficients on an interval or on an explicit list of points.
/// values[i] is the weight at points[i].
struct WeightVector {
  std::optional<Interval> interval;
  std::vector<i64> points;
  std::vector<cplx> values;

  static WeightVector on_interval(Interval iv, std::vector<cplx> vals) {
    if (iv.length < 1 || static_cast<i64>(vals.size()) != iv.length)
      throw BadInput("weight count must equal interval length");
    WeightVector w;
    w.interval = iv;
    w.points.reserve(vals.size());
    for (i64 i = 0; i < iv.length; ++i) w.points.push_back(iv.at(i));
    w.values = std::move(vals);
    return w;
  }

  static WeightVector on_points(std::vector<i64> pts, std::vector<cplx> vals) {
    if (pts.size() != vals.size()) throw BadInput("weight count must equal point count");
    WeightVector w;
    w.points = std::move(pts);
    w.values = std::move(vals);
    return w;
  }

  std::size_t size() const { return values.size(); }

  double norm_inf() const {
    double m = 0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double norm_l1() const {
    double s = 0;
    for (const auto& v : values) s += std::abs(v);
    return s;
  }
  double norm_l2() const {
    double s = 0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s);
  }

  WeightVector scaled(cplx c) const {
    WeightVector w = *this;
    for (auto& v : w.values) v *= c;
    return w;
  }

  /// Coefficients folded onto residues mod q: out[r] = sum of weights at
  /// points congruent to r.
  std::vector<cplx> folded(u64 q) const {
    std::vector<cplx> out(q);
    for (std::size_t i = 0; i < points.size(); ++i) out[reduce(points[i], q)] += values[i];
    return out;
  }
};

}  // namespace ksum
