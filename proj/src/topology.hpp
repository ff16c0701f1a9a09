// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <span>
#include <vector>

#include "scenario.hpp"

namespace urllcsim {

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

double distance_3d(const Vec3& a, const Vec3& b);

// Cell and UE placement plus the per-link large-scale gains. Gains are linear
// power ratios combining pathloss, lognormal shadowing and antenna gains;
// they stay fixed for the lifetime of a run (no mobility, no handover).
struct Topology {
  std::vector<Vec3> cell_pos;
  std::vector<Vec3> ue_pos;
  std::vector<int> serving_cell;       // per UE, argmax large-scale gain
  std::vector<double> large_scale_gain;  // [cell * n_ues + ue], linear
  int grid_cols = 0;
  int grid_rows = 0;
  double hall_x_m = 0;  // hall extent including margin
  double hall_y_m = 0;

  double gain(int cell, int ue) const {
    return large_scale_gain[static_cast<size_t>(cell) * ue_pos.size() + ue];
  }
};

// PL(dB) = A + B*log10(d_3d) + E*log10(f_GHz); distance clamped below 1 m.
// Default coefficients are the "inf-dh-nlos" set shipped in
// data/pathloss_models.csv. Shadowing is not included here.
double pathloss_db(double distance_3d_m, const ScenarioConfig& cfg);

// Cells on a rectangular grid (near-square by default) spaced by the
// inter-site distance; exactly K UEs dropped uniformly in each cell's grid
// tile; attachment by strongest large-scale gain (RSRP rule).
Topology drop_topology(const ScenarioConfig& cfg, std::mt19937_64& pos_rng,
                       std::mt19937_64& shadow_rng);

// Thermal noise power over one PRB bandwidth, in mW, noise figure included.
double noise_per_prb_mw(const ScenarioConfig& cfg);

struct Interferer {
  double power_mw_per_prb = 0;
  double gain = 0;  // large-scale, linear
  double fade = 1;  // small-scale power gain
};

// SINR = S / (N + sum I). The receive diversity gain applies to the wanted
// signal only (post-combining abstraction).
double sinr_per_prb(double serving_power_mw_per_prb, double serving_gain,
                    double serving_fade, double rx_gain_linear,
                    std::span<const Interferer> interferers, double noise_mw);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace urllcsim
