// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mac.hpp"

namespace urllcsim {

// Streaming empirical distribution with nearest-rank quantiles. Samples are
// stored exactly (desk-scale runs stay well inside memory); merge is
// concatenation, so merging commutes and parallel replications combine
// losslessly. +inf samples are legal and sort to the tail.
class EcdfAccumulator {
 public:
  void add(double v);
  void merge(const EcdfAccumulator& other);
  std::size_t count() const { return samples_.size(); }

  // Nearest-rank (inverse ECDF): the ceil(q*n)-th order statistic;
  // quantile(0) = min, quantile(1) = max.
  double quantile(double q) const;

  const std::vector<double>& sorted() const;

 private:
  mutable std::vector<double> samples_;
  mutable bool sorted_ = true;
};

// Empirical (1-rho)-quantile of per-packet latency, drops counted as +inf.
// Returns nullopt unless the sample count reaches 100/rho (the statistical
// confidence rule; extreme quantiles need ~100 exceedances).
std::optional<double> outage_latency(const EcdfAccumulator& latencies, double rho);

std::uint64_t required_samples(double rho);

// Latency samples of one run: resolved packets that arrived inside the
// measurement window.
EcdfAccumulator latency_ecdf(const SimResult& result);

// Total scheduled PRBs per decoded packet (all segments and retransmissions).
EcdfAccumulator prb_ecdf(const SimResult& result);

// Throughput cost in percent: (1 - mu_urllc / mu_be) * 100. Negative values
// (URLLC above BE) are reported as-is.
double throughput_cost(double mu_urllc_bps, double mu_be_bps);

struct KpiSummary {
  double mu_bps = 0;
  std::map<double, std::optional<double>> outage_latency_s;
  double drop_rate = 0;
  double realized_bler = 0;
  std::uint64_t n_packets = 0;  // resolved, post-warmup
  std::uint64_t n_decoded = 0;
  std::uint64_t n_dropped = 0;
  std::uint64_t n_inflight = 0;
};

KpiSummary summarize(const SimResult& result, std::span<const double> rhos);

std::string kpi_json(const KpiSummary& kpi, const SimResult& result);

}  // namespace urllcsim
