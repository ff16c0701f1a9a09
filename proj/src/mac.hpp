// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "fading.hpp"
#include "phy.hpp"
#include "scenario.hpp"
#include "topology.hpp"

namespace urllcsim {

inline constexpr std::uint64_t kNoPacket = std::numeric_limits<std::uint64_t>::max();

// One FTP3 packet's lifecycle. Timestamps are seconds; the five delay
// components sum to the total latency by construction.
struct PacketRecord {
  std::uint64_t id = 0;
  int ue = 0;
  int cell = 0;
  int size_bytes = 0;
  double t_arrival = 0;
  double t_first_grant = -1;  // start of first transmission
  double t_decoded = -1;
  bool dropped = false;
  int n_transmissions = 0;
  std::int64_t total_prbs = 0;
  double d_prep = 0, d_queue = 0, d_tx = 0, d_decode = 0, d_harq = 0;

  bool resolved() const { return dropped || t_decoded >= 0; }
  // +inf for drops (a reliability violation can never improve the outage KPI).
  double latency_s() const {
    if (dropped) return std::numeric_limits<double>::infinity();
    return t_decoded >= 0 ? t_decoded - t_arrival : -1.0;
  }
};

// A transport block in flight (one segment of a packet, or one best-effort
// block). Retransmissions reuse the original MCS and PRB count; attempts
// soft-combine by SINR accumulation.
struct HarqProcess {
  std::uint64_t packet = kNoPacket;
  int ue = 0;
  int segment_index = 0;
  std::int64_t tb_bits = 0;
  std::int64_t payload_bits = 0;
  int mcs_index = 0;
  int n_prb = 0;
  int attempts = 0;
  double next_eligible = 0;
  std::vector<double> attempt_sinrs;
  bool active = false;
};

struct GrantInfo {
  int cell = 0;
  int ue = 0;
  std::uint64_t packet = kNoPacket;
  bool is_retx = false;
  int n_prb = 0;
  int start_prb = 0;
  int mcs_index = 0;
  int attempt = 0;
  std::int64_t tb_bits = 0;
  double sinr_eff = 0;
  bool success = false;
};

struct SimResult {
  ScenarioConfig cfg;
  std::vector<PacketRecord> ledger;  // empty in best-effort mode

  // per-TTI series, laid out [tti * num_cells + cell] (when recorded)
  std::vector<std::uint16_t> prbs_used;
  std::vector<std::uint32_t> decoded_bits;
  std::int64_t n_ttis = 0;

  double warmup_end_s = 0;
  double end_s = 0;

  std::uint64_t generated = 0, decoded = 0, dropped = 0, inflight = 0;
  // post-warmup (arrival inside the measurement window)
  std::uint64_t decoded_pw = 0, dropped_pw = 0, resolved_pw = 0;
  std::uint64_t first_tx = 0, first_tx_fail = 0;
  double decoded_payload_bits_pw = 0;

  double window_s() const { return end_s - warmup_end_s; }
  double mean_throughput_bps() const {
    return window_s() > 0 ? decoded_payload_bits_pw / window_s() : 0.0;
  }
  double realized_first_tx_bler() const {
    return first_tx > 0 ? static_cast<double>(first_tx_fail) / first_tx : 0.0;
  }
  double drop_rate() const {
    const std::uint64_t n = decoded_pw + dropped_pw;
    return n > 0 ? static_cast<double>(dropped_pw) / n : 0.0;
  }
};

struct EngineHooks {
  // Test injection: return true to force a decode failure for this attempt.
  std::function<bool(std::uint64_t packet, int attempt)> force_fail;
};

struct EngineOptions {
  bool record_usage = true;
  EngineHooks hooks;
};

// Scheduler metric: r_k / T_k for proportional fair, 1 / T_k (rate-blind)
// for equal throughput.
double scheduler_metric(SchedulerType s, double inst_rate_bps, double avg_tput_bps);

// The per-TTI event engine: FTP3/full-buffer traffic, CQI reporting, PF/ET
// scheduling with retransmission priority and segmentation, transmission with
// activity-dependent interference, HARQ with Chase combining, and per-packet
// latency bookkeeping. One instance is strictly single-threaded; independent
// instances share nothing mutable.
class Engine {
 public:
  explicit Engine(ScenarioConfig cfg, EngineOptions opts = {});

  void step();
  bool finished() const;
  SimResult run();
  SimResult finalize();

  std::int64_t tti() const { return tti_; }
  double now_s() const { return tti_ * tti_s_; }
  const Topology& topology() const { return topo_; }
  const McsTable& mcs_table() const { return mcs_; }
  const std::vector<GrantInfo>& last_tti_grants() const { return last_grants_; }
  const std::vector<PacketRecord>& ledger() const { return packets_; }

  std::uint64_t decoded_post_warmup() const { return decoded_pw_; }
  std::uint64_t resolved_post_warmup() const { return resolved_pw_; }
  // resolved post-warmup packets that missed the config latency target
  // (drops included)
  std::uint64_t violations_post_warmup() const { return violations_pw_; }

  // Scheduler bookkeeping exposed for tests.
  double avg_throughput_bps(int ue) const { return ues_[ue].avg_tput_bps; }
  std::int64_t prbs_granted(int ue) const { return ues_[ue].prbs_granted; }
  // Segments already released to the scheduler (HARQ cap honored).
  std::int64_t eligible_backlog() const;
  int free_prbs_last_tti(int cell) const {
    return cfg_.prb_count - cells_[cell].used_prbs;
  }

 private:
  struct Segment {
    std::uint64_t packet;
    std::int64_t remaining_bits;
    std::int64_t eligible_tti;
  };

  struct PendingCqi {
    std::int64_t deliver_tti;
    double eff_ref;  // linear, at reference (full-band) power split
    int mcs_hint;
  };

  struct UeState {
    int serving = 0;
    std::mt19937_64 arrival_rng;
    double next_arrival = std::numeric_limits<double>::infinity();
    std::deque<Segment> queue;
    int inflight = 0;
    double cqi_eff_ref = 0.0;
    int cqi_mcs_hint = 0;
    std::deque<PendingCqi> cqi_pending;
    double last_seen_interference_mw = 0.0;
    double avg_tput_bps = 0.0;  // T_k
    std::int64_t bits_granted_tti = 0;
    std::int64_t prbs_granted = 0;
  };

  struct CellState {
    std::vector<int> ues;
    std::vector<int> retx;  // harq ids, sorted by (next_eligible, id)
    std::vector<int> tti_allocs;  // harq ids granted this TTI
    std::vector<int> alloc_start;  // ring start PRB per grant
    std::vector<std::uint8_t> occupied;  // per-PRB activity map, this TTI
    std::mt19937_64 placement_rng;
    int used_prbs = 0;
    int next_pos = 0;  // ring packing cursor
  };

  void generate_arrivals();
  void deliver_and_generate_cqi();
  void schedule_cell(int c);
  void transmit_and_decode();
  void update_ewma();

  double measure_wideband_sinr_ref(int ue);
  void place_allocation(CellState& cs, int harq_id, int n_prb);
  int grant_new_tb(int cell, int ue, std::uint64_t packet, int segment_index,
                   std::int64_t payload_bits, std::int64_t tb_bits, int mcs,
                   int n_prb);
  void resolve_success(int harq_id, double t_tx_end);
  void resolve_drop(int harq_id);
  void finish_packet(PacketRecord& p, double t_decoded);
  void drop_packet(PacketRecord& p);
  int alloc_harq_slot();

  ScenarioConfig cfg_;
  EngineOptions opts_;
  McsTable mcs_;
  Topology topo_;

  double tti_s_ = 0, symbol_s_ = 0, prep_s_ = 0, decode_s_ = 0, fb_s_ = 0;
  double tx_power_mw_ = 0, noise_mw_ = 0, rx_gain_lin_ = 0;
  int re_per_prb_ = 0;
  double warmup_end_s_ = 0;
  double latency_floor_s_ = 0;

  std::int64_t tti_ = 0;
  std::vector<UeState> ues_;
  std::vector<CellState> cells_;
  std::vector<FadingField> fading_;  // [cell * n_ues + ue]
  std::vector<HarqProcess> harq_;
  std::vector<int> harq_free_;
  std::mt19937_64 decode_rng_;

  std::vector<PacketRecord> packets_;
  // per-packet engine state, indexed by packet id
  std::vector<std::int64_t> pkt_remaining_;  // payload bits not yet granted
  std::vector<int> pkt_pending_;             // granted blocks not yet resolved
  std::vector<int> pkt_segments_;            // next segment index
  std::uint64_t next_packet_id_ = 0;

  std::vector<GrantInfo> last_grants_;
  std::vector<std::uint16_t> usage_;
  std::vector<std::uint32_t> decoded_bits_;
  std::vector<std::uint32_t> tti_decoded_cell_;  // scratch, per cell
  std::vector<double> sinr_buf_;                 // scratch
  std::vector<double> p_prb_;                    // scratch, per cell
  std::vector<std::pair<double, int>> ranking_;  // scratch (metric, ue)

  std::uint64_t decoded_total_ = 0, dropped_total_ = 0;
  std::uint64_t decoded_pw_ = 0, dropped_pw_ = 0, resolved_pw_ = 0;
  std::uint64_t violations_pw_ = 0;
  std::uint64_t first_tx_ = 0, first_tx_fail_ = 0;
  double decoded_payload_bits_pw_ = 0;
};

SimResult run_simulation(const ScenarioConfig& cfg, EngineOptions opts = {});

}  // namespace urllcsim
