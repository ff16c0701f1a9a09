// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "mac.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace urllcsim {

namespace {
constexpr double kTimeEps = 1e-12;
}

double scheduler_metric(SchedulerType s, double inst_rate_bps, double avg_tput_bps) {
  assert(avg_tput_bps > 0);
  if (s == SchedulerType::EqualThroughput) return 1.0 / avg_tput_bps;
  return inst_rate_bps / avg_tput_bps;
}

Engine::Engine(ScenarioConfig cfg, EngineOptions opts)
    : cfg_(std::move(cfg)), opts_(std::move(opts)) {
  validate_scenario(cfg_);
  mcs_ = McsTable::for_config(cfg_);

  symbol_s_ = cfg_.symbol_duration_s();
  tti_s_ = cfg_.tti_duration_s();
  prep_s_ = cfg_.prep_delay_s();
  decode_s_ = cfg_.decode_delay_s();
  fb_s_ = cfg_.harq_feedback_delay_s();
  tx_power_mw_ = db_to_linear(cfg_.tx_power_dbm);
  noise_mw_ = noise_per_prb_mw(cfg_);
  rx_gain_lin_ = db_to_linear(cfg_.rx_gain_db);
  re_per_prb_ = cfg_.data_re_per_prb();
  warmup_end_s_ = cfg_.warmup_ttis * tti_s_;
  latency_floor_s_ = prep_s_ + tti_s_ + decode_s_;

  auto pos_rng = make_stream(cfg_.seed, "topology", cfg_.replication);
  auto shadow_rng = make_stream(cfg_.seed, "shadowing", cfg_.replication);
  topo_ = drop_topology(cfg_, pos_rng, shadow_rng);

  const int n_ues = cfg_.total_ues();
  ues_.resize(n_ues);
  cells_.resize(cfg_.num_cells);
  for (int c = 0; c < cfg_.num_cells; ++c) {
    cells_[c].occupied.assign(cfg_.prb_count, 0);
    cells_[c].placement_rng =
        make_stream(cfg_.seed, "placement:" + std::to_string(c), cfg_.replication);
  }
  for (int u = 0; u < n_ues; ++u) {
    UeState& ue = ues_[u];
    ue.serving = topo_.serving_cell[u];
    cells_[ue.serving].ues.push_back(u);
    ue.arrival_rng = make_stream(cfg_.seed, "arrivals:" + std::to_string(u),
                                 cfg_.replication);
    if (cfg_.traffic_mode == TrafficMode::UrllcFtp3 && cfg_.arrival_rate_pps > 0) {
      std::exponential_distribution<double> exp_dist(cfg_.arrival_rate_pps);
      ue.next_arrival = exp_dist(ue.arrival_rng);
    }
    ue.cqi_eff_ref = db_to_linear(-10.0);  // conservative until first report
    ue.avg_tput_bps = cfg_.pf_init_throughput_bps;
  }

  fading_.reserve(static_cast<size_t>(cfg_.num_cells) * n_ues);
  for (int c = 0; c < cfg_.num_cells; ++c)
    for (int u = 0; u < n_ues; ++u)
      fading_.emplace_back(
          cfg_.prb_count, cfg_.fading, cfg_.fading_prb_correlated,
          cfg_.fading_autocorr,
          substream_seed(cfg_.seed,
                         "fading:" + std::to_string(c) + ":" + std::to_string(u),
                         cfg_.replication));

  decode_rng_ = make_stream(cfg_.seed, "decode", cfg_.replication);
  tti_decoded_cell_.assign(cfg_.num_cells, 0);
}

std::int64_t Engine::eligible_backlog() const {
  std::int64_t n = 0;
  for (const UeState& ue : ues_) {
    if (ue.inflight >= cfg_.harq_processes_per_ue) continue;
    for (const Segment& s : ue.queue)
      if (s.eligible_tti <= tti_) ++n;
  }
  return n;
}

bool Engine::finished() const {
  if (cfg_.max_decoded_packets > 0 && decoded_pw_ >= cfg_.max_decoded_packets)
    return true;
  return now_s() >= cfg_.sim_time_s - kTimeEps;
}

void Engine::generate_arrivals() {
  if (cfg_.traffic_mode != TrafficMode::UrllcFtp3) return;
  const double t_limit = std::min((tti_ + 1) * tti_s_, cfg_.sim_time_s);
  const int n_ues = static_cast<int>(ues_.size());
  for (int u = 0; u < n_ues; ++u) {
    UeState& ue = ues_[u];
    while (ue.next_arrival < t_limit) {
      const double t = ue.next_arrival;
      std::exponential_distribution<double> exp_dist(cfg_.arrival_rate_pps);
      ue.next_arrival = t + exp_dist(ue.arrival_rng);

      PacketRecord rec;
      rec.id = next_packet_id_++;
      rec.ue = u;
      rec.cell = ue.serving;
      rec.size_bytes = cfg_.payload_bytes;
      rec.t_arrival = t;
      packets_.push_back(rec);
      pkt_remaining_.push_back(static_cast<std::int64_t>(cfg_.payload_bytes) * 8);
      pkt_pending_.push_back(0);
      pkt_segments_.push_back(0);

      const auto eligible = static_cast<std::int64_t>(
          std::ceil((t + prep_s_) / tti_s_ - 1e-9));
      ue.queue.push_back({rec.id, static_cast<std::int64_t>(cfg_.payload_bytes) * 8,
                          eligible});
    }
  }
}

double Engine::measure_wideband_sinr_ref(int u) {
  UeState& ue = ues_[u];
  const int c = ue.serving;
  const int n_ues = static_cast<int>(ues_.size());
  FadingField& f = fading_[static_cast<size_t>(c) * n_ues + u];
  const double denom = noise_mw_ + ue.last_seen_interference_mw;
  const double base =
      (tx_power_mw_ / cfg_.prb_count) * topo_.gain(c, u) * rx_gain_lin_ / denom;
  if (!f.enabled() || cfg_.fading_prb_correlated) return base * f.gain(0, tti_);
  sinr_buf_.clear();
  for (int p = 0; p < cfg_.prb_count; ++p)
    sinr_buf_.push_back(base * f.gain(p, tti_));
  return effective_sinr(sinr_buf_, cfg_.sinr_mapping(), cfg_.eesm_beta);
}

void Engine::deliver_and_generate_cqi() {
  const int n_ues = static_cast<int>(ues_.size());
  for (int u = 0; u < n_ues; ++u) {
    UeState& ue = ues_[u];
    if ((tti_ + u) % cfg_.cqi_period_ttis == 0) {
      const double eff = measure_wideband_sinr_ref(u);
      ue.cqi_pending.push_back({tti_ + cfg_.cqi_delay_ttis, eff, mcs_.quantize(eff)});
    }
    while (!ue.cqi_pending.empty() && ue.cqi_pending.front().deliver_tti <= tti_) {
      ue.cqi_eff_ref = ue.cqi_pending.front().eff_ref;
      ue.cqi_mcs_hint = ue.cqi_pending.front().mcs_hint;
      ue.cqi_pending.pop_front();
    }
  }
}

int Engine::alloc_harq_slot() {
  if (!harq_free_.empty()) {
    const int id = harq_free_.back();
    harq_free_.pop_back();
    return id;
  }
  harq_.emplace_back();
  return static_cast<int>(harq_.size()) - 1;
}

// Places n_prb contiguous PRBs (ring-contiguous modulo prb_count) at the
// cell's packing cursor and marks the activity map.
void Engine::place_allocation(CellState& cs, int harq_id, int n_prb) {
  cs.tti_allocs.push_back(harq_id);
  cs.alloc_start.push_back(cs.next_pos);
  for (int k = 0; k < n_prb; ++k)
    cs.occupied[(cs.next_pos + k) % cfg_.prb_count] = 1;
  cs.next_pos = (cs.next_pos + n_prb) % cfg_.prb_count;
  cs.used_prbs += n_prb;
}

int Engine::grant_new_tb(int cell, int ue, std::uint64_t packet, int segment_index,
                         std::int64_t payload_bits, std::int64_t tb_bits, int mcs,
                         int n_prb) {
  const int id = alloc_harq_slot();
  HarqProcess& h = harq_[id];
  h = HarqProcess{};
  h.packet = packet;
  h.ue = ue;
  h.segment_index = segment_index;
  h.tb_bits = tb_bits;
  h.payload_bits = payload_bits;
  h.mcs_index = mcs;
  h.n_prb = n_prb;
  h.active = true;

  place_allocation(cells_[cell], id, n_prb);
  ues_[ue].inflight += 1;
  ues_[ue].bits_granted_tti += tb_bits;
  return id;
}

void Engine::schedule_cell(int c) {
  CellState& cell = cells_[c];
  cell.tti_allocs.clear();
  cell.alloc_start.clear();
  std::fill(cell.occupied.begin(), cell.occupied.end(), 0);
  cell.used_prbs = 0;
  // Fresh random packing origin every TTI: keeps allocations contiguous but
  // decorrelates which PRBs neighboring cells load, so sparse transmissions
  // rarely overlap.
  cell.next_pos = static_cast<int>(cell.placement_rng() % cfg_.prb_count);

  const double t0 = now_s();
  int free = cfg_.prb_count;

  // Retransmissions drain first, in next-eligible order. A pending
  // retransmission that does not fit the residual keeps waiting; it cannot
  // shrink (Chase combining needs the original block size).
  for (auto it = cell.retx.begin(); it != cell.retx.end() && free > 0;) {
    HarqProcess& h = harq_[*it];
    if (h.next_eligible > t0 + kTimeEps) break;  // sorted by eligibility
    if (h.n_prb > free) {
      ++it;
      continue;
    }
    const int id = *it;
    it = cell.retx.erase(it);
    place_allocation(cell, id, h.n_prb);
    free -= h.n_prb;
    ues_[h.ue].bits_granted_tti += h.tb_bits;
  }

  if (free <= 0) return;

  const bool best_effort = cfg_.traffic_mode == TrafficMode::BestEffort;

  auto ue_eligible = [&](int u) {
    const UeState& ue = ues_[u];
    if (ue.inflight >= cfg_.harq_processes_per_ue) return false;
    if (best_effort) return true;
    return !ue.queue.empty() && ue.queue.front().eligible_tti <= tti_;
  };

  // Static per-TTI metric ranking, then round-robin passes over it: one
  // segment per UE per pass until PRBs or work run out.
  ranking_.clear();
  for (int u : cell.ues) {
    if (!ue_eligible(u)) continue;
    const UeState& ue = ues_[u];
    const double inst_rate =
        mcs_.at(ue.cqi_mcs_hint).se * re_per_prb_ * cfg_.prb_count / tti_s_;
    ranking_.push_back({scheduler_metric(cfg_.scheduler, inst_rate, ue.avg_tput_bps), u});
  }
  std::sort(ranking_.begin(), ranking_.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  bool progress = true;
  while (free > 0 && progress) {
    progress = false;
    for (const auto& [metric, u] : ranking_) {
      if (free <= 0) break;
      if (!ue_eligible(u)) continue;
      UeState& ue = ues_[u];
      // Link adaptation sees the CQI at reference (full-band) power and
      // scales by the actual power split of the PRBs allocated so far plus
      // the candidate allocation.
      const double ref = ue.cqi_eff_ref;
      const int used_now = cell.used_prbs;
      const auto sinr_of = [&, ref, used_now](int n_prb) {
        return ref * cfg_.prb_count / static_cast<double>(used_now + n_prb);
      };

      if (best_effort) {
        const LinkAllocation a = select_fill(sinr_of(free), cfg_.bler_target, free,
                                             mcs_, re_per_prb_);
        if (a.tb_bits <= kCrcBits) continue;
        grant_new_tb(c, u, kNoPacket, 0, a.tb_bits - kCrcBits, a.tb_bits,
                     a.mcs_index, a.n_prb);
        free = cfg_.prb_count - cell.used_prbs;
        progress = true;
        continue;
      }

      Segment& seg = ue.queue.front();
      const std::uint64_t pkt_id = seg.packet;
      const int seg_idx = pkt_segments_[pkt_id]++;
      try {
        const LinkAllocation a = select_mcs(sinr_of, cfg_.bler_target, free,
                                            seg.remaining_bits, mcs_, re_per_prb_);
        grant_new_tb(c, u, pkt_id, seg_idx, seg.remaining_bits, a.tb_bits,
                     a.mcs_index, a.n_prb);
        pkt_remaining_[pkt_id] -= seg.remaining_bits;
        pkt_pending_[pkt_id] += 1;
        ue.queue.pop_front();
      } catch (const SimError&) {
        // Too large for the residual: fill what is free this TTI and keep
        // the remainder at the head with the parent arrival time.
        const LinkAllocation a =
            select_fill(sinr_of(free), cfg_.bler_target, free, mcs_, re_per_prb_);
        const std::int64_t cap = a.tb_bits - kCrcBits;
        if (cap <= 0) {
          pkt_segments_[pkt_id] -= 1;
          continue;  // residual too poor to carry payload
        }
        const std::int64_t carried = std::min<std::int64_t>(cap, seg.remaining_bits);
        grant_new_tb(c, u, pkt_id, seg_idx, carried, carried + kCrcBits,
                     a.mcs_index, a.n_prb);
        pkt_remaining_[pkt_id] -= carried;
        pkt_pending_[pkt_id] += 1;
        seg.remaining_bits -= carried;
        if (seg.remaining_bits <= 0) ue.queue.pop_front();
      }
      PacketRecord& pkt = packets_[pkt_id];
      if (pkt.t_first_grant < 0) pkt.t_first_grant = t0;
      free = cfg_.prb_count - cell.used_prbs;
      progress = true;
    }
  }
}

void Engine::finish_packet(PacketRecord& p, double t_decoded) {
  p.t_decoded = t_decoded;
  p.d_prep = prep_s_;
  p.d_queue = p.t_first_grant - (p.t_arrival + prep_s_);
  p.d_tx = tti_s_;
  p.d_decode = decode_s_;
  p.d_harq = (p.t_decoded - p.t_arrival) - p.d_prep - p.d_queue - p.d_tx - p.d_decode;
  assert(p.latency_s() >= latency_floor_s_ - kTimeEps);
  assert(p.d_queue >= -kTimeEps && p.d_harq >= -kTimeEps);

  decoded_total_ += 1;
  const double bits = static_cast<double>(p.size_bytes) * 8.0;
  if (p.t_decoded >= warmup_end_s_) {
    decoded_payload_bits_pw_ += bits;
    tti_decoded_cell_[p.cell] += static_cast<std::uint32_t>(bits);
  }
  if (p.t_arrival >= warmup_end_s_) {
    decoded_pw_ += 1;
    resolved_pw_ += 1;
    if (p.latency_s() > cfg_.latency_target_s()) violations_pw_ += 1;
  }
}

void Engine::drop_packet(PacketRecord& p) {
  if (p.resolved()) return;
  p.dropped = true;
  UeState& ue = ues_[p.ue];
  for (auto it = ue.queue.begin(); it != ue.queue.end();) {
    if (it->packet == p.id)
      it = ue.queue.erase(it);
    else
      ++it;
  }
  dropped_total_ += 1;
  if (p.t_arrival >= warmup_end_s_) {
    dropped_pw_ += 1;
    resolved_pw_ += 1;
    violations_pw_ += 1;
  }
}

void Engine::resolve_success(int harq_id, double t_tx_end) {
  HarqProcess& h = harq_[harq_id];
  ues_[h.ue].inflight -= 1;
  if (h.packet == kNoPacket) {
    const double t_dec = t_tx_end + decode_s_;
    const double bits = static_cast<double>(h.payload_bits);
    if (t_dec >= warmup_end_s_) {
      decoded_payload_bits_pw_ += bits;
      tti_decoded_cell_[ues_[h.ue].serving] += static_cast<std::uint32_t>(bits);
    }
  } else {
    pkt_pending_[h.packet] -= 1;
    PacketRecord& p = packets_[h.packet];
    if (!p.resolved() && pkt_remaining_[h.packet] == 0 && pkt_pending_[h.packet] == 0)
      finish_packet(p, t_tx_end + decode_s_);
  }
  h.active = false;
  harq_free_.push_back(harq_id);
}

void Engine::resolve_drop(int harq_id) {
  HarqProcess& h = harq_[harq_id];
  ues_[h.ue].inflight -= 1;
  if (h.packet != kNoPacket) {
    pkt_pending_[h.packet] -= 1;
    drop_packet(packets_[h.packet]);
  }
  h.active = false;
  harq_free_.push_back(harq_id);
}

void Engine::transmit_and_decode() {
  const double t0 = now_s();
  const double t_tx_end = t0 + tti_s_;
  const int n_ues = static_cast<int>(ues_.size());
  const int n_cells = cfg_.num_cells;

  p_prb_.resize(n_cells);
  for (int c = 0; c < n_cells; ++c)
    p_prb_[c] = cells_[c].used_prbs > 0 ? tx_power_mw_ / cells_[c].used_prbs : 0.0;

  last_grants_.clear();
  for (int c = 0; c < n_cells; ++c) {
    CellState& cell = cells_[c];
    for (size_t j = 0; j < cell.tti_allocs.size(); ++j) {
      const int harq_id = cell.tti_allocs[j];
      HarqProcess& h = harq_[harq_id];
      const int start = cell.alloc_start[j];
      const int u = h.ue;
      const double base_sig = p_prb_[c] * topo_.gain(c, u) * rx_gain_lin_;

      sinr_buf_.clear();
      double mean_interference = 0.0;
      for (int k = 0; k < h.n_prb; ++k) {
        const int p = (start + k) % cfg_.prb_count;
        const double fade =
            fading_[static_cast<size_t>(c) * n_ues + u].gain(p, tti_);
        double interference = 0.0;
        for (int c2 = 0; c2 < n_cells; ++c2) {
          if (c2 == c || !cells_[c2].occupied[p]) continue;
          interference += p_prb_[c2] * topo_.gain(c2, u) *
                          fading_[static_cast<size_t>(c2) * n_ues + u].gain(p, tti_);
        }
        mean_interference += interference;
        sinr_buf_.push_back(base_sig * fade / (noise_mw_ + interference));
      }
      ues_[u].last_seen_interference_mw = mean_interference / h.n_prb;

      const double eff =
          effective_sinr(sinr_buf_, cfg_.sinr_mapping(), cfg_.eesm_beta);
      h.attempts += 1;
      h.attempt_sinrs.push_back(eff);
      ues_[u].prbs_granted += h.n_prb;
      if (h.packet != kNoPacket) {
        PacketRecord& p = packets_[h.packet];
        p.n_transmissions += 1;
        p.total_prbs += h.n_prb;
      }

      const bool forced =
          opts_.hooks.force_fail && opts_.hooks.force_fail(h.packet, h.attempts);
      const bool ok =
          !forced && decode(h.attempt_sinrs, h.tb_bits,
                            static_cast<std::int64_t>(h.n_prb) * re_per_prb_,
                            mcs_.at(h.mcs_index), decode_rng_);

      if (h.attempts == 1 && t0 >= warmup_end_s_) {
        first_tx_ += 1;
        if (!ok) first_tx_fail_ += 1;
      }

      GrantInfo g;
      g.cell = c;
      g.ue = u;
      g.packet = h.packet;
      g.is_retx = h.attempts > 1;
      g.n_prb = h.n_prb;
      g.start_prb = start;
      g.mcs_index = h.mcs_index;
      g.attempt = h.attempts;
      g.tb_bits = h.tb_bits;
      g.sinr_eff = eff;
      g.success = ok;
      last_grants_.push_back(g);

      if (ok) {
        resolve_success(harq_id, t_tx_end);
        continue;
      }
      // NACK path. A block whose packet is already resolved (sibling segment
      // exhausted HARQ) is flushed instead of retransmitted.
      if (h.packet != kNoPacket && packets_[h.packet].resolved()) {
        ues_[u].inflight -= 1;
        pkt_pending_[h.packet] -= 1;
        h.active = false;
        harq_free_.push_back(harq_id);
        continue;
      }
      if (h.attempts <= cfg_.max_harq_retx) {
        h.next_eligible = t_tx_end + decode_s_ + fb_s_ + prep_s_;
        auto& retx = cells_[c].retx;
        auto pos = std::upper_bound(
            retx.begin(), retx.end(), harq_id, [&](int lhs, int rhs) {
              if (harq_[lhs].next_eligible != harq_[rhs].next_eligible)
                return harq_[lhs].next_eligible < harq_[rhs].next_eligible;
              return lhs < rhs;
            });
        retx.insert(pos, harq_id);
      } else {
        resolve_drop(harq_id);
      }
    }
  }
}

void Engine::update_ewma() {
  const double alpha = 1.0 / cfg_.pf_ewma_ttis;
  for (UeState& ue : ues_) {
    ue.avg_tput_bps = (1.0 - alpha) * ue.avg_tput_bps +
                      alpha * (static_cast<double>(ue.bits_granted_tti) / tti_s_);
    ue.bits_granted_tti = 0;
  }
}

void Engine::step() {
  generate_arrivals();
  deliver_and_generate_cqi();
  for (int c = 0; c < cfg_.num_cells; ++c) schedule_cell(c);
  transmit_and_decode();
  update_ewma();

  if (opts_.record_usage) {
    for (int c = 0; c < cfg_.num_cells; ++c) {
      usage_.push_back(static_cast<std::uint16_t>(cells_[c].used_prbs));
      decoded_bits_.push_back(tti_decoded_cell_[c]);
    }
  }
  std::fill(tti_decoded_cell_.begin(), tti_decoded_cell_.end(), 0);
  tti_ += 1;
}

SimResult Engine::run() {
  while (!finished()) step();
  return finalize();
}

SimResult Engine::finalize() {
  SimResult r;
  r.cfg = cfg_;
  r.ledger = std::move(packets_);
  r.prbs_used = std::move(usage_);
  r.decoded_bits = std::move(decoded_bits_);
  r.n_ttis = tti_;
  r.warmup_end_s = warmup_end_s_;
  r.end_s = now_s();
  r.generated = next_packet_id_;
  r.decoded = decoded_total_;
  r.dropped = dropped_total_;
  r.inflight = r.generated - r.decoded - r.dropped;
  r.decoded_pw = decoded_pw_;
  r.dropped_pw = dropped_pw_;
  r.resolved_pw = resolved_pw_;
  r.first_tx = first_tx_;
  r.first_tx_fail = first_tx_fail_;
  r.decoded_payload_bits_pw = decoded_payload_bits_pw_;
  assert(r.generated == r.decoded + r.dropped + r.inflight);
  return r;
}

SimResult run_simulation(const ScenarioConfig& cfg, EngineOptions opts) {
  Engine engine(cfg, std::move(opts));
  return engine.run();
}

}  // namespace urllcsim
