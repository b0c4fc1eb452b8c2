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

// Arbitrary-length DFT (radix-2 for powers of two, Bluestein chirp-z
// otherwise) plus the closed form for additive character sums over intervals.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "ksum/interval.hpp"
#include "ksum/modarith.hpp"

namespace ksum {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// exp(2 pi i num / den) with num reduced exactly before the division.
inline cplx unit_root(i64 num, u64 den) {
  const u64 r = reduce(num, den);
  const double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

/// e_q(x) = exp(2 pi i x / q).
inline cplx e_q(i64 x, u64 q) { return unit_root(x, q); }

namespace detail {

// In-place iterative radix-2 transform; n must be a power of two and
// twiddle[k] = exp(sign * 2 pi i k / n) for k < n/2.
inline void radix2(std::vector<cplx>& a, const std::vector<cplx>& twiddle) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2, stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * twiddle[k * stride];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

inline std::vector<cplx> twiddles(std::size_t n, int sign) {
  std::vector<cplx> t(n / 2);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double angle = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    t[k] = {std::cos(angle), std::sin(angle)};
  }
  return t;
}

}  // namespace detail

/// Immutable transform plan for one length and sign; safe to share across
/// threads once constructed.
class DftPlan {
 public:
  DftPlan(std::size_t n, int sign) : n_(n), sign_(sign >= 0 ? 1 : -1) {
    if (n_ == 0) throw BadInput("transform length must be >= 1");
    if ((n_ & (n_ - 1)) == 0) {
      pow2_ = true;
      tw_ = detail::twiddles(n_, sign_);
      return;
    }
    m_ = 1;
    while (m_ < 2 * n_ - 1) m_ <<= 1;
    tw_fwd_ = detail::twiddles(m_, -1);
    tw_inv_ = detail::twiddles(m_, +1);
    // chirp[t] = exp(sign * i pi t^2 / n), with t^2 reduced mod 2n exactly.
    chirp_.resize(n_);
    const u64 two_n = 2 * n_;
    for (std::size_t t = 0; t < n_; ++t) {
      const u64 t2 = mul_mod(t, t, two_n);
      const double angle = sign_ * std::numbers::pi * static_cast<double>(t2) / static_cast<double>(n_);
      chirp_[t] = {std::cos(angle), std::sin(angle)};
    }
    kernel_.assign(m_, cplx{});
    kernel_[0] = std::conj(chirp_[0]);
    for (std::size_t t = 1; t < n_; ++t) kernel_[t] = kernel_[m_ - t] = std::conj(chirp_[t]);
    detail::radix2(kernel_, tw_fwd_);
  }

  std::size_t size() const { return n_; }
  int sign() const { return sign_; }

  /// out[k] = sum_j in[j] exp(sign * 2 pi i j k / n).
  std::vector<cplx> operator()(std::span<const cplx> in) const {
    if (in.size() != n_) throw BadInput("input length does not match plan");
    if (pow2_) {
      std::vector<cplx> a(in.begin(), in.end());
      detail::radix2(a, tw_);
      return a;
    }
    std::vector<cplx> a(m_);
    for (std::size_t j = 0; j < n_; ++j) a[j] = in[j] * chirp_[j];
    detail::radix2(a, tw_fwd_);
    for (std::size_t i = 0; i < m_; ++i) a[i] *= kernel_[i];
    detail::radix2(a, tw_inv_);
    const double scale = 1.0 / static_cast<double>(m_);
    std::vector<cplx> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = a[k] * scale * chirp_[k];
    return out;
  }

 private:
  std::size_t n_;
  int sign_;
  bool pow2_ = false;
  std::size_t m_ = 0;
  std::vector<cplx> tw_, tw_fwd_, tw_inv_, chirp_, kernel_;
};

/// One-shot transform; sign must be +1 or -1.
inline std::vector<cplx> dft(std::span<const cplx> v, int sign) { return DftPlan(v.size(), sign)(v); }

/// sum_{n in J} e_q(n y) in closed form. Exactly J.length when q | y.
inline cplx interval_character_sum(const Interval& J, i64 y, u64 q) {
  const u64 yr = reduce(y, q);
  if (yr == 0) return {static_cast<double>(J.length), 0.0};
  // sum = e((2 N0 + N + 1) y / 2q) * sin(pi N y / q) / sin(pi y / q)
  const u64 two_q = 2 * q;
  const u64 phase_num = mul_mod(reduce(2 * J.offset + J.length + 1, two_q), yr, two_q);
  const u64 top = mul_mod(reduce(J.length, two_q), yr, two_q);
  const double pi = std::numbers::pi;
  const double num = std::sin(pi * static_cast<double>(top) / static_cast<double>(q));
  const double den = std::sin(pi * static_cast<double>(yr) / static_cast<double>(q));
  const double angle = pi * static_cast<double>(phase_num) / static_cast<double>(q);
  return cplx{std::cos(angle), std::sin(angle)} * (num / den);
}

}  // namespace ksum
