// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace urllcsim {

// Small-scale fading state for one (cell, UE) link: per-PRB Rayleigh power
// gains (exponential with unit mean) evolving as a first-order AR process on
// the complex amplitude. States update lazily; a gap of k TTIs collapses into
// a single catch-up step with coefficient a^k, so cost is O(1) per access.
class FadingField {
 public:
  // autocorr is the per-TTI AR(1) coefficient of the complex amplitude.
  // prb_correlated = true keeps a single wideband state for all PRBs.
  FadingField(int n_prbs, bool enabled, bool prb_correlated, double autocorr,
              std::uint64_t seed);

  // Power gain for the given PRB at TTI index `tti` (monotone non-decreasing
  // access times per PRB are required, which the TTI loop guarantees).
  double gain(int prb, std::int64_t tti);

  bool enabled() const { return enabled_; }

 private:
  struct State {
    double re = 0, im = 0;
    std::int64_t tti = -1;
  };

  void refresh(State& s, std::int64_t tti);

  std::vector<State> states_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  double autocorr_ = 0.9;
  double log_autocorr_ = 0.0;
  bool enabled_ = true;
  bool prb_correlated_ = false;
};

}  // namespace urllcsim
