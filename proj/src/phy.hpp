// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace urllcsim {

inline constexpr int kCrcBits = 24;  // per transport block / segment

struct McsEntry {
  int index = 0;
  int mod_order = 2;       // bits per symbol
  double code_rate = 0.0;  // informational
  double se = 0.0;         // spectral efficiency, bits per RE
};

class McsTable {
 public:
  static McsTable builtin_nr15();  // 15-entry CQI-style table, SE 0.1523..7.4063
  static McsTable load_csv(const std::string& path);
  static McsTable from_entries(std::vector<McsEntry> entries);
  static McsTable for_config(const ScenarioConfig& cfg);

  const McsEntry& at(int index) const { return entries_[index]; }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<McsEntry>& entries() const { return entries_; }

  // Highest index with se <= the capacity of the given SINR (CQI
  // quantization used for scheduler rate hints).
  int quantize(double sinr_linear) const;

 private:
  std::vector<McsEntry> entries_;
};

// Mutual-information-equivalent effective SINR: the value whose Shannon
// capacity equals the mean per-PRB capacity. The EESM variant maps through
// exp(-s/beta) instead. Both are permutation-invariant and idempotent on
// constant inputs.
double effective_sinr(std::span<const double> per_prb_linear,
                      SinrMapping mapping = SinrMapping::MutualInfo,
                      double eesm_beta = 1.0);

// Block error probability from the finite-blocklength normal approximation
// with n = n_re channel uses and L = tb_bits information bits. The capacity
// term is capped at the modulation order; output clamped to [1e-12, 1].
double bler(double sinr_linear, std::int64_t tb_bits, std::int64_t n_re,
            const McsEntry& mcs);

struct LinkAllocation {
  int mcs_index = 0;
  int n_prb = 0;
  std::int64_t tb_bits = 0;  // payload + CRC
};

// Highest MCS whose predicted BLER meets the target for its own allocation
// size; falls back to index 0 when nothing meets the target. Throws
// Infeasible when the allocation would exceed prb_budget (the caller
// segments across TTIs in that case). `sinr_of_alloc` maps a candidate PRB
// count to the effective SINR the transmission would see (the power split
// depends on the allocation size).
LinkAllocation select_mcs(const std::function<double(int)>& sinr_of_alloc,
                          double bler_target, int prb_budget,
                          std::int64_t payload_bits, const McsTable& table,
                          int re_per_prb);

LinkAllocation select_mcs(double sinr_eff, double bler_target, int prb_budget,
                          std::int64_t payload_bits, const McsTable& table,
                          int re_per_prb);

// Fills exactly n_prb PRBs with the largest transport block whose predicted
// BLER meets the target (MCS 0 fallback). Used for segment tails and
// full-buffer grants. Returns tb_bits <= 24 + capacity; a block that cannot
// carry any payload past its CRC has tb_bits = 0.
LinkAllocation select_fill(double sinr_eff, double bler_target, int n_prb,
                           const McsTable& table, int re_per_prb);

// Chase combining: attempts soft-combine as a sum of effective SINRs; one
// uniform draw decides the decode.
bool decode(std::span<const double> attempt_sinrs, std::int64_t tb_bits,
            std::int64_t n_re, const McsEntry& mcs, std::mt19937_64& rng);

double combined_sinr(std::span<const double> attempt_sinrs);

}  // namespace urllcsim
