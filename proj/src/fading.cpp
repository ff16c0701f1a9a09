// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "fading.hpp"

#include <cmath>
#include <limits>

namespace urllcsim {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kMinGain = 1e-9;  // keep gains strictly positive
}  // namespace

FadingField::FadingField(int n_prbs, bool enabled, bool prb_correlated,
                         double autocorr, std::uint64_t seed)
    : states_(prb_correlated ? 1 : n_prbs),
      rng_(seed),
      autocorr_(autocorr),
      log_autocorr_(autocorr > 0 ? std::log(autocorr)
                                 : -std::numeric_limits<double>::infinity()),
      enabled_(enabled),
      prb_correlated_(prb_correlated) {}

void FadingField::refresh(State& s, std::int64_t tti) {
  if (s.tti < 0) {
    s.re = gauss_(rng_) * kInvSqrt2;
    s.im = gauss_(rng_) * kInvSqrt2;
    s.tti = tti;
    return;
  }
  if (tti <= s.tti) return;
  const double gap = static_cast<double>(tti - s.tti);
  const double a = gap == 1.0 ? autocorr_ : std::exp(gap * log_autocorr_);
  const double innov = std::sqrt(std::max(0.0, 1.0 - a * a));
  s.re = a * s.re + innov * gauss_(rng_) * kInvSqrt2;
  s.im = a * s.im + innov * gauss_(rng_) * kInvSqrt2;
  s.tti = tti;
}

double FadingField::gain(int prb, std::int64_t tti) {
  if (!enabled_) return 1.0;
  State& s = states_[prb_correlated_ ? 0 : prb];
  refresh(s, tti);
  const double g = s.re * s.re + s.im * s.im;
  return g > kMinGain ? g : kMinGain;
}

}  // namespace urllcsim
