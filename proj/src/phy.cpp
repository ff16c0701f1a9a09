// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "phy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace urllcsim {

namespace {

constexpr double kLog2E = 1.4426950408889634;
constexpr double kBlerFloor = 1e-12;

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double ceil_div_real(double num, double den) { return std::ceil(num / den); }

}  // namespace

McsTable McsTable::builtin_nr15() {
  // 15-entry CQI-style table (QPSK..256QAM), code rates in 1/1024 units.
  static const struct {
    int qm;
    int rate1024;
    double se;
  } rows[] = {
      {2, 78, 0.1523},   {2, 193, 0.3770},  {2, 449, 0.8770},
      {4, 378, 1.4766},  {4, 490, 1.9141},  {4, 616, 2.4063},
      {6, 466, 2.7305},  {6, 567, 3.3223},  {6, 666, 3.9023},
      {6, 772, 4.5234},  {6, 873, 5.1152},  {8, 711, 5.5547},
      {8, 797, 6.2266},  {8, 885, 6.9141},  {8, 948, 7.4063},
  };
  std::vector<McsEntry> entries;
  int idx = 0;
  for (const auto& r : rows)
    entries.push_back({idx++, r.qm, r.rate1024 / 1024.0, r.se});
  return from_entries(std::move(entries));
}

McsTable McsTable::from_entries(std::vector<McsEntry> entries) {
  if (entries.empty()) throw_validation("MCS table: no entries");
  double prev = 0.0;
  for (size_t i = 0; i < entries.size(); ++i) {
    McsEntry& e = entries[i];
    e.index = static_cast<int>(i);
    if (e.se <= prev)
      throw_validation("MCS table: spectral efficiency must be strictly increasing");
    if (e.mod_order < 1) throw_validation("MCS table: mod_order must be >= 1");
    prev = e.se;
  }
  McsTable t;
  t.entries_ = std::move(entries);
  return t;
}

McsTable McsTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open MCS table file: " + path);
  std::vector<McsEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    // strip header row if present
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.find("index") != std::string::npos) continue;
    std::istringstream ss(line);
    std::string cell;
    McsEntry e;
    try {
      std::getline(ss, cell, ',');
      e.index = std::stoi(cell);
      std::getline(ss, cell, ',');
      e.mod_order = std::stoi(cell);
      std::getline(ss, cell, ',');
      e.code_rate = std::stod(cell);
      std::getline(ss, cell, ',');
      e.se = std::stod(cell);
    } catch (const std::exception&) {
      throw_parse("MCS table '" + path + "': bad row: " + line);
    }
    entries.push_back(e);
  }
  return from_entries(std::move(entries));
}

McsTable McsTable::for_config(const ScenarioConfig& cfg) {
  if (cfg.mcs_table_file.empty()) return builtin_nr15();
  return load_csv(cfg.mcs_table_file);
}

int McsTable::quantize(double sinr_linear) const {
  const double cap = std::log2(1.0 + std::max(sinr_linear, 0.0));
  int best = 0;
  for (const auto& e : entries_)
    if (e.se <= cap) best = e.index;
  return best;
}

double effective_sinr(std::span<const double> per_prb_linear, SinrMapping mapping,
                      double eesm_beta) {
  assert(!per_prb_linear.empty());
  const double n = static_cast<double>(per_prb_linear.size());
  if (mapping == SinrMapping::Eesm) {
    double acc = 0.0;
    for (double s : per_prb_linear) acc += std::exp(-s / eesm_beta);
    return -eesm_beta * std::log(acc / n);
  }
  double acc = 0.0;
  for (double s : per_prb_linear) acc += std::log2(1.0 + s);
  return std::exp2(acc / n) - 1.0;
}

double bler(double sinr_linear, std::int64_t tb_bits, std::int64_t n_re,
            const McsEntry& mcs) {
  assert(tb_bits > 0 && n_re > 0);
  const double n = static_cast<double>(n_re);
  const double l = static_cast<double>(tb_bits);
  const double cap = static_cast<double>(mcs.mod_order);
  if (l > n * cap) return 1.0;  // rate beyond the constellation

  // Capacity saturates at the modulation order; the dispersion is evaluated
  // at the same saturation point so the curve stays monotone in SINR.
  const double s_sat = std::exp2(cap) - 1.0;
  const double s = std::clamp(sinr_linear, 1e-30, s_sat);
  const double c = std::log2(1.0 + s);
  const double onep = 1.0 + s;
  double v = (1.0 - 1.0 / (onep * onep)) * kLog2E * kLog2E;
  v = std::max(v, 1e-12);
  const double arg = (n * c - l + 0.5 * std::log2(n)) / std::sqrt(n * v);
  const double eps = q_function(arg);
  return std::clamp(eps, kBlerFloor, 1.0);
}

LinkAllocation select_mcs(const std::function<double(int)>& sinr_of_alloc,
                          double bler_target, int prb_budget,
                          std::int64_t payload_bits, const McsTable& table,
                          int re_per_prb) {
  assert(payload_bits > 0);
  const std::int64_t tb_bits = payload_bits + kCrcBits;

  auto alloc_for = [&](const McsEntry& e) {
    const double bits_per_prb = e.se * re_per_prb;
    return static_cast<int>(ceil_div_real(static_cast<double>(tb_bits), bits_per_prb));
  };

  for (int i = table.size() - 1; i >= 0; --i) {
    const McsEntry& e = table.at(i);
    const int n_prb = alloc_for(e);
    const double eps =
        bler(sinr_of_alloc(n_prb), tb_bits, static_cast<std::int64_t>(n_prb) * re_per_prb, e);
    if (eps <= bler_target) {
      if (n_prb > prb_budget)
        throw_infeasible("allocation needs " + std::to_string(n_prb) +
                         " PRBs, budget is " + std::to_string(prb_budget));
      return {i, n_prb, tb_bits};
    }
  }
  // Conservative fallback: nothing meets the target, transmit at index 0.
  const int n_prb = alloc_for(table.at(0));
  if (n_prb > prb_budget)
    throw_infeasible("allocation needs " + std::to_string(n_prb) +
                     " PRBs at MCS 0, budget is " + std::to_string(prb_budget));
  return {0, n_prb, tb_bits};
}

LinkAllocation select_mcs(double sinr_eff, double bler_target, int prb_budget,
                          std::int64_t payload_bits, const McsTable& table,
                          int re_per_prb) {
  return select_mcs([sinr_eff](int) { return sinr_eff; }, bler_target,
                    prb_budget, payload_bits, table, re_per_prb);
}

LinkAllocation select_fill(double sinr_eff, double bler_target, int n_prb,
                           const McsTable& table, int re_per_prb) {
  assert(n_prb > 0);
  const std::int64_t n_re = static_cast<std::int64_t>(n_prb) * re_per_prb;
  for (int i = table.size() - 1; i >= 0; --i) {
    const McsEntry& e = table.at(i);
    const auto tb = static_cast<std::int64_t>(std::floor(e.se * static_cast<double>(n_re)));
    if (tb <= kCrcBits) continue;
    if (bler(sinr_eff, tb, n_re, e) <= bler_target) return {i, n_prb, tb};
  }
  const McsEntry& e0 = table.at(0);
  const auto tb = static_cast<std::int64_t>(std::floor(e0.se * static_cast<double>(n_re)));
  if (tb <= kCrcBits) return {0, n_prb, 0};  // block too small to carry payload
  return {0, n_prb, tb};
}

double combined_sinr(std::span<const double> attempt_sinrs) {
  double acc = 0.0;
  for (double s : attempt_sinrs) acc += s;
  return acc;
}

bool decode(std::span<const double> attempt_sinrs, std::int64_t tb_bits,
            std::int64_t n_re, const McsEntry& mcs, std::mt19937_64& rng) {
  assert(!attempt_sinrs.empty());
  const double eps = bler(combined_sinr(attempt_sinrs), tb_bits, n_re, mcs);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) > eps;
}

}  // namespace urllcsim
