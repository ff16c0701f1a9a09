// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace urllcsim {

enum class TrafficMode { UrllcFtp3, BestEffort };
enum class SchedulerType { ProportionalFair, EqualThroughput };
enum class SinrMapping { MutualInfo, Eesm };

// One fully-specified simulation scenario. Instances are value types and are
// treated as immutable once validated; every derived quantity (durations,
// loads, sub-seeds) is computed from here so that a scenario file plus
// overrides pins a run completely.
struct ScenarioConfig {
  // topology
  int num_cells = 12;
  int ues_per_cell = 10;
  double inter_site_distance_m = 20.0;
  int grid_cols = 0;  // 0 = auto (near-square layout)
  double hall_margin_m = 10.0;
  double bs_height_m = 10.0;
  double ue_height_m = 1.5;  // assumption, config-exposed

  // spectrum / numerology
  double carrier_freq_ghz = 4.0;
  double bandwidth_mhz = 40.0;
  double scs_khz = 30.0;
  int prb_count = 100;
  int tti_symbols = 4;
  int overhead_symbols = 1;  // control/DMRS per TTI per PRB

  // traffic
  int payload_bytes = 50;
  double arrival_rate_pps = 100.0;  // lambda, per UE
  TrafficMode traffic_mode = TrafficMode::UrllcFtp3;

  // scheduler / link adaptation
  SchedulerType scheduler = SchedulerType::ProportionalFair;
  double bler_target = 0.01;
  int cqi_period_ttis = 5;
  int cqi_delay_ttis = 2;
  double pf_ewma_ttis = 100.0;
  double pf_init_throughput_bps = 1000.0;

  // latency / reliability targets
  double latency_target_ms = 1.0;  // phi
  double outage_prob = 1e-2;       // rho

  // processing + HARQ timing (fractional symbols kept as real numbers)
  double prep_delay_symbols = 2.5;
  double decode_delay_symbols = 4.5;
  double harq_feedback_delay_symbols = 4.5;
  int max_harq_retx = 4;
  int harq_processes_per_ue = 16;

  // radio
  double tx_power_dbm = 25.0;
  double noise_figure_db = 9.0;
  double rx_gain_db = 3.0;  // 2x2 receive-diversity abstraction
  double bs_antenna_gain_dbi = 0.0;
  double ue_antenna_gain_dbi = 0.0;

  // channel abstraction (pathloss + shadowing + per-PRB flat fading)
  std::string pathloss_model = "inf-dh-nlos";
  double pathloss_const_db = 33.63;
  double pathloss_dist_coef = 21.9;
  double pathloss_freq_coef = 20.0;
  double shadowing_sigma_db = 4.0;
  bool fading = true;
  double fading_autocorr = 0.9;  // per-TTI AR(1) coefficient of the amplitude
  bool fading_prb_correlated = false;
  std::string sinr_mapping_name = "mi";  // mi | eesm
  double eesm_beta = 1.0;

  // data files (empty = built-in defaults)
  std::string mcs_table_file;

  // run control
  double sim_time_s = 10.0;
  std::uint64_t max_decoded_packets = 0;  // 0 = horizon only
  int warmup_ttis = 2000;
  std::uint64_t seed = 1;
  std::uint64_t replication = 0;

  SinrMapping sinr_mapping() const {
    return sinr_mapping_name == "eesm" ? SinrMapping::Eesm
                                       : SinrMapping::MutualInfo;
  }

  double scs_hz() const { return scs_khz * 1e3; }
  double bandwidth_hz() const { return bandwidth_mhz * 1e6; }
  double carrier_freq_hz() const { return carrier_freq_ghz * 1e9; }
  double latency_target_s() const { return latency_target_ms * 1e-3; }

  // Average OFDM symbol duration including cyclic prefix: a 14-symbol slot
  // lasts 0.5 ms at 30 kHz and scales inversely with the subcarrier spacing.
  double symbol_duration_s() const;
  double tti_duration_s() const { return tti_symbols * symbol_duration_s(); }

  double prep_delay_s() const { return prep_delay_symbols * symbol_duration_s(); }
  double decode_delay_s() const { return decode_delay_symbols * symbol_duration_s(); }
  double harq_feedback_delay_s() const {
    return harq_feedback_delay_symbols * symbol_duration_s();
  }

  // Data resource elements per PRB per TTI after the control/DMRS overhead.
  int data_re_per_prb() const { return 12 * (tti_symbols - overhead_symbols); }

  int total_ues() const { return num_cells * ues_per_cell; }

  // Total offered network load in bits/s: C * K * B * 8 * lambda.
  // Undefined for best-effort traffic (infinite payload).
  double offered_load_bps() const;
};

// Parses the flat `key = value` scenario format ('#' starts a comment) and
// validates every invariant; unknown keys are rejected. Defaults are applied
// for keys not present; an empty file yields the default scenario.
ScenarioConfig load_scenario(std::string_view text);

// Applies one `key=value` override on top of an existing config and
// revalidates. Used for CLI --set flags.
ScenarioConfig apply_override(const ScenarioConfig& cfg, std::string_view key,
                              std::string_view value);

void validate_scenario(const ScenarioConfig& cfg);

// Canonical textual form: every key in registry order. Two configs are equal
// iff their canonical texts are equal.
std::string canonical_text(const ScenarioConfig& cfg);

// 16-hex-digit hash of the canonical text, for stamping outputs.
std::string scenario_hash(const ScenarioConfig& cfg);

std::string get_key(const ScenarioConfig& cfg, std::string_view key);
std::vector<std::string> known_keys();

std::string to_string(TrafficMode m);
std::string to_string(SchedulerType s);

}  // namespace urllcsim
