// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "topology.hpp"

#include <cmath>

namespace urllcsim {

double distance_3d(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double pathloss_db(double distance_3d_m, const ScenarioConfig& cfg) {
  const double d = std::max(distance_3d_m, 1.0);
  return cfg.pathloss_const_db + cfg.pathloss_dist_coef * std::log10(d) +
         cfg.pathloss_freq_coef * std::log10(cfg.carrier_freq_ghz);
}

Topology drop_topology(const ScenarioConfig& cfg, std::mt19937_64& pos_rng,
                       std::mt19937_64& shadow_rng) {
  Topology topo;
  const int c = cfg.num_cells;
  const double d = cfg.inter_site_distance_m;

  int cols = cfg.grid_cols;
  if (cols == 0) cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(c))));
  int rows = (c + cols - 1) / cols;
  topo.grid_cols = cols;
  topo.grid_rows = rows;
  topo.hall_x_m = (cols - 1) * d + 2 * cfg.hall_margin_m;
  topo.hall_y_m = (rows - 1) * d + 2 * cfg.hall_margin_m;

  topo.cell_pos.reserve(c);
  for (int i = 0; i < c; ++i) {
    const int col = i % cols, row = i / cols;
    topo.cell_pos.push_back(
        {cfg.hall_margin_m + col * d, cfg.hall_margin_m + row * d, cfg.bs_height_m});
  }

  // Exactly K UEs per cell tile (d x d around the BS).
  const int n_ues = cfg.total_ues();
  topo.ue_pos.reserve(n_ues);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < c; ++i) {
    for (int k = 0; k < cfg.ues_per_cell; ++k) {
      const double x = topo.cell_pos[i].x + (unit(pos_rng) - 0.5) * d;
      const double y = topo.cell_pos[i].y + (unit(pos_rng) - 0.5) * d;
      topo.ue_pos.push_back({x, y, cfg.ue_height_m});
    }
  }

  // Large-scale gain: pathloss + lognormal shadowing (one draw per link)
  // + antenna gains. Shadowing draws happen in (cell, ue) order so a fixed
  // seed pins the map.
  topo.large_scale_gain.assign(static_cast<size_t>(c) * n_ues, 0.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < c; ++i) {
    for (int u = 0; u < n_ues; ++u) {
      const double pl = pathloss_db(distance_3d(topo.cell_pos[i], topo.ue_pos[u]), cfg);
      const double shadow_db = cfg.shadowing_sigma_db * gauss(shadow_rng);
      const double gain_db = -pl + shadow_db + cfg.bs_antenna_gain_dbi +
                             cfg.ue_antenna_gain_dbi;
      topo.large_scale_gain[static_cast<size_t>(i) * n_ues + u] = db_to_linear(gain_db);
    }
  }

  topo.serving_cell.assign(n_ues, 0);
  for (int u = 0; u < n_ues; ++u) {
    int best = 0;
    for (int i = 1; i < c; ++i)
      if (topo.gain(i, u) > topo.gain(best, u)) best = i;
    topo.serving_cell[u] = best;
  }
  return topo;
}

double noise_per_prb_mw(const ScenarioConfig& cfg) {
  // -174 dBm/Hz thermal density.
  const double prb_bw_hz = 12.0 * cfg.scs_hz();
  const double noise_dbm =
      -174.0 + 10.0 * std::log10(prb_bw_hz) + cfg.noise_figure_db;
  return db_to_linear(noise_dbm);
}

double sinr_per_prb(double serving_power_mw_per_prb, double serving_gain,
                    double serving_fade, double rx_gain_linear,
                    std::span<const Interferer> interferers, double noise_mw) {
  const double s = serving_power_mw_per_prb * serving_gain * serving_fade * rx_gain_linear;
  double denom = noise_mw;
  for (const auto& i : interferers)
    denom += i.power_mw_per_prb * i.gain * i.fade;
  return s / denom;
}

}  // namespace urllcsim
