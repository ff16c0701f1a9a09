// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "kpi.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "scenario.hpp"

namespace urllcsim {

void EcdfAccumulator::add(double v) {
  samples_.push_back(v);
  sorted_ = samples_.size() <= 1;
}

void EcdfAccumulator::merge(const EcdfAccumulator& other) {
  samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
  sorted_ = samples_.size() <= 1;
}

const std::vector<double>& EcdfAccumulator::sorted() const {
  if (!sorted_) {
    std::sort(samples_.begin(), samples_.end());
    sorted_ = true;
  }
  return samples_;
}

double EcdfAccumulator::quantile(double q) const {
  assert(!samples_.empty());
  assert(q >= 0.0 && q <= 1.0);
  const auto& s = sorted();
  const auto n = static_cast<double>(s.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  if (rank < 1) rank = 1;
  if (rank > s.size()) rank = s.size();
  return s[rank - 1];
}

std::uint64_t required_samples(double rho) {
  return static_cast<std::uint64_t>(std::ceil(100.0 / rho));
}

std::optional<double> outage_latency(const EcdfAccumulator& latencies, double rho) {
  if (latencies.count() < required_samples(rho)) return std::nullopt;
  return latencies.quantile(1.0 - rho);
}

EcdfAccumulator latency_ecdf(const SimResult& result) {
  EcdfAccumulator acc;
  for (const PacketRecord& p : result.ledger) {
    if (p.t_arrival < result.warmup_end_s || !p.resolved()) continue;
    acc.add(p.latency_s());
  }
  return acc;
}

EcdfAccumulator prb_ecdf(const SimResult& result) {
  EcdfAccumulator acc;
  for (const PacketRecord& p : result.ledger) {
    if (p.t_arrival < result.warmup_end_s || p.t_decoded < 0) continue;
    acc.add(static_cast<double>(p.total_prbs));
  }
  return acc;
}

double throughput_cost(double mu_urllc_bps, double mu_be_bps) {
  if (mu_be_bps <= 0)
    throw_misuse("throughput_cost: best-effort throughput must be > 0");
  return (1.0 - mu_urllc_bps / mu_be_bps) * 100.0;
}

KpiSummary summarize(const SimResult& result, std::span<const double> rhos) {
  KpiSummary k;
  k.mu_bps = result.mean_throughput_bps();
  k.drop_rate = result.drop_rate();
  k.realized_bler = result.realized_first_tx_bler();
  k.n_packets = result.resolved_pw;
  k.n_decoded = result.decoded_pw;
  k.n_dropped = result.dropped_pw;
  k.n_inflight = result.inflight;

  if (result.cfg.traffic_mode == TrafficMode::UrllcFtp3) {
    const EcdfAccumulator lat = latency_ecdf(result);
    for (double rho : rhos) {
      if (lat.count() == 0) {
        k.outage_latency_s[rho] = std::nullopt;
        continue;
      }
      k.outage_latency_s[rho] = outage_latency(lat, rho);
    }
  } else {
    // Best effort has no latency KPI by definition.
    for (double rho : rhos) k.outage_latency_s[rho] = std::nullopt;
  }
  return k;
}

std::string kpi_json(const KpiSummary& kpi, const SimResult& result) {
  nlohmann::ordered_json j;
  j["scenario_hash"] = scenario_hash(result.cfg);
  j["seed"] = result.cfg.seed;
  j["replication"] = result.cfg.replication;
  j["traffic_mode"] = to_string(result.cfg.traffic_mode);
  j["scheduler"] = to_string(result.cfg.scheduler);
  j["mu_bps"] = kpi.mu_bps;
  nlohmann::ordered_json outage = nlohmann::ordered_json::object();
  for (const auto& [rho, v] : kpi.outage_latency_s) {
    char key[32];
    std::snprintf(key, sizeof(key), "%g", rho);
    if (v)
      outage[key] = *v;
    else
      outage[key] = nullptr;
  }
  j["outage_latency_s"] = outage;
  j["drop_rate"] = kpi.drop_rate;
  j["realized_bler"] = kpi.realized_bler;
  j["n_packets"] = kpi.n_packets;
  j["n_decoded"] = kpi.n_decoded;
  j["n_dropped"] = kpi.n_dropped;
  j["n_inflight"] = kpi.n_inflight;
  j["window_s"] = result.window_s();
  return j.dump(2);
}

}  // namespace urllcsim
