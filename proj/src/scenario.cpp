// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace urllcsim {

double ScenarioConfig::symbol_duration_s() const {
  return (0.5e-3 / 14.0) * (30e3 / scs_hz());
}

double ScenarioConfig::offered_load_bps() const {
  if (traffic_mode == TrafficMode::BestEffort) {
    throw_misuse("offered_load is undefined for best_effort traffic (infinite payload)");
  }
  return static_cast<double>(num_cells) * ues_per_cell * payload_bytes * 8.0 *
         arrival_rate_pps;
}

std::string to_string(TrafficMode m) {
  return m == TrafficMode::UrllcFtp3 ? "urllc_ftp3" : "best_effort";
}

std::string to_string(SchedulerType s) {
  return s == SchedulerType::ProportionalFair ? "pf" : "et";
}

namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw_validation("field '" + key + "': not an integer: '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw_validation("field '" + key + "': not a number: '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw_validation("field '" + key + "': expected on/off, got '" + v + "'");
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct KeySpec {
  const char* name;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define INT_KEY(name, field)                                                  \
  KeySpec{name,                                                               \
          [](ScenarioConfig& c, const std::string& v) {                       \
            c.field = static_cast<decltype(c.field)>(parse_int(name, v));     \
          },                                                                  \
          [](const ScenarioConfig& c) { return std::to_string(c.field); }}

#define REAL_KEY(name, field)                                        \
  KeySpec{name,                                                      \
          [](ScenarioConfig& c, const std::string& v) {              \
            c.field = parse_real(name, v);                           \
          },                                                         \
          [](const ScenarioConfig& c) { return fmt_real(c.field); }}

#define BOOL_KEY(name, field)                                                 \
  KeySpec{name,                                                               \
          [](ScenarioConfig& c, const std::string& v) {                       \
            c.field = parse_bool(name, v);                                    \
          },                                                                  \
          [](const ScenarioConfig& c) { return c.field ? "on" : "off"; }}

#define STR_KEY(name, field)                                   \
  KeySpec{name,                                                \
          [](ScenarioConfig& c, const std::string& v) { c.field = v; }, \
          [](const ScenarioConfig& c) { return c.field; }}

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = {
      INT_KEY("num_cells", num_cells),
      INT_KEY("ues_per_cell", ues_per_cell),
      REAL_KEY("inter_site_distance_m", inter_site_distance_m),
      INT_KEY("grid_cols", grid_cols),
      REAL_KEY("hall_margin_m", hall_margin_m),
      REAL_KEY("bs_height_m", bs_height_m),
      REAL_KEY("ue_height_m", ue_height_m),
      REAL_KEY("carrier_freq_ghz", carrier_freq_ghz),
      REAL_KEY("bandwidth_mhz", bandwidth_mhz),
      REAL_KEY("scs_khz", scs_khz),
      INT_KEY("prb_count", prb_count),
      INT_KEY("tti_symbols", tti_symbols),
      INT_KEY("overhead_symbols", overhead_symbols),
      INT_KEY("payload_B", payload_bytes),
      REAL_KEY("arrival_rate_pps", arrival_rate_pps),
      KeySpec{"traffic_mode",
              [](ScenarioConfig& c, const std::string& v) {
                if (v == "urllc_ftp3")
                  c.traffic_mode = TrafficMode::UrllcFtp3;
                else if (v == "best_effort")
                  c.traffic_mode = TrafficMode::BestEffort;
                else
                  throw_validation(
                      "field 'traffic_mode': expected urllc_ftp3|best_effort, got '" +
                      v + "'");
              },
              [](const ScenarioConfig& c) { return to_string(c.traffic_mode); }},
      KeySpec{"scheduler",
              [](ScenarioConfig& c, const std::string& v) {
                if (v == "pf")
                  c.scheduler = SchedulerType::ProportionalFair;
                else if (v == "et")
                  c.scheduler = SchedulerType::EqualThroughput;
                else
                  throw_validation("field 'scheduler': expected pf|et, got '" +
                                   v + "'");
              },
              [](const ScenarioConfig& c) { return to_string(c.scheduler); }},
      REAL_KEY("bler_target", bler_target),
      INT_KEY("cqi_period_ttis", cqi_period_ttis),
      INT_KEY("cqi_delay_ttis", cqi_delay_ttis),
      REAL_KEY("pf_ewma_ttis", pf_ewma_ttis),
      REAL_KEY("pf_init_throughput_bps", pf_init_throughput_bps),
      REAL_KEY("latency_target_ms", latency_target_ms),
      REAL_KEY("outage_prob", outage_prob),
      REAL_KEY("prep_delay_symbols", prep_delay_symbols),
      REAL_KEY("decode_delay_symbols", decode_delay_symbols),
      REAL_KEY("harq_feedback_delay_symbols", harq_feedback_delay_symbols),
      INT_KEY("max_harq_retx", max_harq_retx),
      INT_KEY("harq_processes_per_ue", harq_processes_per_ue),
      REAL_KEY("tx_power_dbm", tx_power_dbm),
      REAL_KEY("noise_figure_db", noise_figure_db),
      REAL_KEY("rx_gain_db", rx_gain_db),
      REAL_KEY("bs_antenna_gain_dbi", bs_antenna_gain_dbi),
      REAL_KEY("ue_antenna_gain_dbi", ue_antenna_gain_dbi),
      STR_KEY("pathloss_model", pathloss_model),
      REAL_KEY("pathloss_const_db", pathloss_const_db),
      REAL_KEY("pathloss_dist_coef", pathloss_dist_coef),
      REAL_KEY("pathloss_freq_coef", pathloss_freq_coef),
      REAL_KEY("shadowing_sigma_db", shadowing_sigma_db),
      BOOL_KEY("fading", fading),
      REAL_KEY("fading_autocorr", fading_autocorr),
      BOOL_KEY("fading_prb_correlated", fading_prb_correlated),
      STR_KEY("sinr_mapping", sinr_mapping_name),
      REAL_KEY("eesm_beta", eesm_beta),
      STR_KEY("mcs_table_file", mcs_table_file),
      REAL_KEY("sim_time_s", sim_time_s),
      INT_KEY("max_decoded_packets", max_decoded_packets),
      INT_KEY("warmup_ttis", warmup_ttis),
      INT_KEY("seed", seed),
      INT_KEY("replication", replication),
  };
  return keys;
}

#undef INT_KEY
#undef REAL_KEY
#undef BOOL_KEY
#undef STR_KEY

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : registry())
    if (name == k.name) return &k;
  return nullptr;
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw_validation(msg);
}

}  // namespace

void validate_scenario(const ScenarioConfig& c) {
  check(c.num_cells >= 1, "field 'num_cells': must be >= 1");
  check(c.ues_per_cell >= 1, "field 'ues_per_cell': must be >= 1");
  check(c.inter_site_distance_m > 0, "field 'inter_site_distance_m': must be > 0");
  check(c.grid_cols >= 0, "field 'grid_cols': must be >= 0 (0 = auto)");
  check(c.grid_cols == 0 || c.grid_cols <= c.num_cells,
        "field 'grid_cols': exceeds num_cells");
  check(c.prb_count >= 1, "field 'prb_count': must be >= 1");
  check(c.tti_symbols >= 1, "field 'tti_symbols': must be >= 1");
  check(c.overhead_symbols >= 0, "field 'overhead_symbols': must be >= 0");
  check(c.overhead_symbols < c.tti_symbols,
        "field 'overhead_symbols': must be < tti_symbols");
  check(c.payload_bytes >= 1, "field 'payload_B': must be >= 1");
  check(c.arrival_rate_pps >= 0, "field 'arrival_rate_pps': must be >= 0");
  check(c.bler_target > 0 && c.bler_target < 1,
        "field 'bler_target': must be in (0, 1)");
  check(c.outage_prob > 0 && c.outage_prob < 1,
        "field 'outage_prob': must be in (0, 1)");
  check(c.latency_target_ms > 0, "field 'latency_target_ms': must be > 0");
  const double scs = c.scs_khz;
  check(scs == 15.0 || scs == 30.0 || scs == 60.0 || scs == 120.0,
        "field 'scs_khz': must be one of 15, 30, 60, 120");
  check(static_cast<double>(c.prb_count) * 12.0 * c.scs_hz() <= c.bandwidth_hz(),
        "field 'prb_count': prb_count * 12 * scs exceeds bandwidth");
  check(c.prep_delay_symbols >= 0, "field 'prep_delay_symbols': must be >= 0");
  check(c.decode_delay_symbols >= 0, "field 'decode_delay_symbols': must be >= 0");
  check(c.harq_feedback_delay_symbols >= 0,
        "field 'harq_feedback_delay_symbols': must be >= 0");
  check(c.max_harq_retx >= 0, "field 'max_harq_retx': must be >= 0");
  check(c.harq_processes_per_ue >= 1,
        "field 'harq_processes_per_ue': must be >= 1");
  check(c.cqi_period_ttis >= 1, "field 'cqi_period_ttis': must be >= 1");
  check(c.cqi_delay_ttis >= 0, "field 'cqi_delay_ttis': must be >= 0");
  check(c.pf_ewma_ttis >= 1, "field 'pf_ewma_ttis': must be >= 1");
  check(c.pf_init_throughput_bps > 0,
        "field 'pf_init_throughput_bps': must be > 0");
  check(c.shadowing_sigma_db >= 0, "field 'shadowing_sigma_db': must be >= 0");
  check(c.fading_autocorr >= 0 && c.fading_autocorr < 1,
        "field 'fading_autocorr': must be in [0, 1)");
  check(c.sinr_mapping_name == "mi" || c.sinr_mapping_name == "eesm",
        "field 'sinr_mapping': expected mi|eesm");
  check(c.eesm_beta > 0, "field 'eesm_beta': must be > 0");
  check(c.sim_time_s > 0, "field 'sim_time_s': must be > 0");
  check(c.warmup_ttis >= 0, "field 'warmup_ttis': must be >= 0");
  check(c.pathloss_model == "inf-dh-nlos" || c.pathloss_model == "custom",
        "field 'pathloss_model': expected inf-dh-nlos|custom");
}

ScenarioConfig load_scenario(std::string_view text) {
  ScenarioConfig cfg;
  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++lineno;

    std::string line(raw);
    if (size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw_parse("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw_parse("line " + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw_parse("line " + std::to_string(lineno) + ": empty value for '" + key + "'");

    const KeySpec* spec = find_key(key);
    if (!spec) throw_validation("unknown key '" + key + "'");
    spec->set(cfg, value);
  }
  validate_scenario(cfg);
  return cfg;
}

ScenarioConfig apply_override(const ScenarioConfig& cfg, std::string_view key,
                              std::string_view value) {
  const KeySpec* spec = find_key(trim(key));
  if (!spec) throw_validation("unknown key '" + std::string(key) + "'");
  ScenarioConfig out = cfg;
  spec->set(out, trim(value));
  validate_scenario(out);
  return out;
}

std::string canonical_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& k : registry()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

std::string scenario_hash(const ScenarioConfig& cfg) {
  std::string text = canonical_text(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string get_key(const ScenarioConfig& cfg, std::string_view key) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw_validation("unknown key '" + std::string(key) + "'");
  return spec->get(cfg);
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& k : registry()) out.push_back(k.name);
  return out;
}

}  // namespace urllcsim
