// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "urllcsim.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "kpi.hpp"
#include "mac.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "topology.hpp"

using namespace urllcsim;

struct usim_scenario {
  ScenarioConfig cfg;
};

struct usim_result {
  SimResult result;
};

namespace {

thread_local std::string g_last_error;

usim_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return USIM_ERR_PARSE;
    case ErrorCode::Validation: return USIM_ERR_VALIDATION;
    case ErrorCode::Misuse: return USIM_ERR_MISUSE;
    case ErrorCode::Infeasible: return USIM_ERR_INFEASIBLE;
    case ErrorCode::InsufficientSamples: return USIM_ERR_INSUFFICIENT_SAMPLES;
    case ErrorCode::Io: return USIM_ERR_IO;
    case ErrorCode::Internal: return USIM_ERR_INTERNAL;
  }
  return USIM_ERR_INTERNAL;
}

usim_status fail(usim_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
usim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return USIM_OK;
  } catch (const SimError& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(USIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(USIM_ERR_INTERNAL, e.what());
  }
}

usim_status copy_out(const std::string& s, char* buf, size_t buflen) {
  if (!buf || buflen == 0) return fail(USIM_ERR_INVALID_ARG, "null buffer");
  if (s.size() + 1 > buflen)
    return fail(USIM_ERR_INVALID_ARG,
                "buffer too small: need " + std::to_string(s.size() + 1) + " bytes");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return USIM_OK;
}

}  // namespace

extern "C" {

const char* usim_version(void) { return "0.1.0"; }

const char* usim_last_error(void) { return g_last_error.c_str(); }

usim_status usim_scenario_create(usim_scenario** out) {
  if (!out) return fail(USIM_ERR_INVALID_ARG, "null out");
  return guarded([&] {
    auto* s = new usim_scenario{ScenarioConfig{}};
    validate_scenario(s->cfg);
    *out = s;
  });
}

usim_status usim_scenario_load(const char* text, usim_scenario** out) {
  if (!text || !out) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = new usim_scenario{load_scenario(text)}; });
}

usim_status usim_scenario_load_file(const char* path, usim_scenario** out) {
  if (!path || !out) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = new usim_scenario{load_scenario(read_text_file(path))}; });
}

usim_status usim_scenario_set(usim_scenario* s, const char* key, const char* value) {
  if (!s || !key || !value) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { s->cfg = apply_override(s->cfg, key, value); });
}

usim_status usim_scenario_get(const usim_scenario* s, const char* key, char* buf,
                              size_t buflen) {
  if (!s || !key) return fail(USIM_ERR_INVALID_ARG, "null argument");
  std::string v;
  const usim_status st = guarded([&] { v = get_key(s->cfg, key); });
  if (st != USIM_OK) return st;
  return copy_out(v, buf, buflen);
}

usim_status usim_scenario_hash(const usim_scenario* s, char* buf, size_t buflen) {
  if (!s) return fail(USIM_ERR_INVALID_ARG, "null scenario");
  std::string v;
  const usim_status st = guarded([&] { v = scenario_hash(s->cfg); });
  if (st != USIM_OK) return st;
  return copy_out(v, buf, buflen);
}

usim_status usim_scenario_symbol_duration(const usim_scenario* s, double* out_s) {
  if (!s || !out_s) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out_s = s->cfg.symbol_duration_s(); });
}

usim_status usim_scenario_offered_load(const usim_scenario* s, double* out_bps) {
  if (!s || !out_bps) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out_bps = s->cfg.offered_load_bps(); });
}

usim_status usim_scenario_write_topology_csv(const usim_scenario* s,
                                             const char* cells_path,
                                             const char* ues_path) {
  if (!s || !cells_path || !ues_path)
    return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    auto pos_rng = make_stream(s->cfg.seed, "topology", s->cfg.replication);
    auto shadow_rng = make_stream(s->cfg.seed, "shadowing", s->cfg.replication);
    const Topology topo = drop_topology(s->cfg, pos_rng, shadow_rng);
    write_topology_csv(topo, s->cfg, cells_path, ues_path);
  });
}

void usim_scenario_free(usim_scenario* s) { delete s; }

usim_status usim_run(const usim_scenario* s, usim_result** out) {
  if (!s || !out) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = new usim_result{run_simulation(s->cfg)}; });
}

usim_status usim_result_kpi(const usim_result* r, usim_kpi* out) {
  if (!r || !out) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const SimResult& res = r->result;
    out->mu_bps = res.mean_throughput_bps();
    out->drop_rate = res.drop_rate();
    out->realized_bler = res.realized_first_tx_bler();
    out->n_packets = res.resolved_pw;
    out->n_decoded = res.decoded_pw;
    out->n_dropped = res.dropped_pw;
    out->n_inflight = res.inflight;
    out->window_s = res.window_s();
  });
}

usim_status usim_result_outage_latency(const usim_result* r, double rho,
                                       double* out_s) {
  if (!r || !out_s) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    if (!(rho > 0) || !(rho < 1)) throw_validation("rho must be in (0, 1)");
    const EcdfAccumulator lat = latency_ecdf(r->result);
    const auto v = outage_latency(lat, rho);
    if (!v)
      throw_insufficient("outage latency needs " +
                         std::to_string(required_samples(rho)) + " samples, have " +
                         std::to_string(lat.count()));
    *out_s = *v;
  });
}

usim_status usim_result_kpi_json(const usim_result* r, const double* rhos,
                                 size_t n_rhos, char** out_json) {
  if (!r || !out_json) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    std::vector<double> rho_list;
    if (rhos && n_rhos > 0)
      rho_list.assign(rhos, rhos + n_rhos);
    else
      rho_list.push_back(r->result.cfg.outage_prob);
    const KpiSummary kpi = summarize(r->result, rho_list);
    const std::string json = kpi_json(kpi, r->result);
    char* buf = static_cast<char*>(::operator new(json.size() + 1));
    std::memcpy(buf, json.c_str(), json.size() + 1);
    *out_json = buf;
  });
}

usim_status usim_result_write_ledger_csv(const usim_result* r, const char* path) {
  if (!r || !path) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { write_ledger_csv(r->result, path); });
}

usim_status usim_result_write_utilization_csv(const usim_result* r, const char* path) {
  if (!r || !path) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { write_utilization_csv(r->result, path); });
}

usim_status usim_result_write_latency_ecdf_csv(const usim_result* r, const char* path) {
  if (!r || !path) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    write_ecdf_csv(latency_ecdf(r->result), "latency_s", r->result, path);
  });
}

usim_status usim_result_write_prb_ecdf_csv(const usim_result* r, const char* path) {
  if (!r || !path) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    write_ecdf_csv(prb_ecdf(r->result), "prbs_per_packet", r->result, path);
  });
}

void usim_result_free(usim_result* r) { delete r; }

void usim_string_free(char* s) { ::operator delete(s); }

usim_status usim_capacity_search(const usim_scenario* s,
                                 const usim_capacity_query* query,
                                 usim_capacity_result* out) {
  if (!s || !query || !out) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    CapacityQuery q;
    q.phi_s = query->phi_s;
    q.rho = query->rho;
    q.lambda_low = query->lambda_low;
    q.lambda_high = query->lambda_high;
    q.rel_tolerance = query->rel_tolerance;
    q.min_packets = query->min_packets;
    const CapacityResult res = capacity_search(s->cfg, q);
    out->lambda_star = res.lambda_star;
    out->omega_star_bps = res.omega_star_bps;
    out->probes = res.probes;
    out->noisy = res.noisy ? 1 : 0;
    out->upper_bound_feasible = res.upper_bound_feasible ? 1 : 0;
  });
}

usim_status usim_be_baseline(const usim_scenario* s, const char* scheduler,
                             double* out_mu_bps) {
  if (!s || !scheduler || !out_mu_bps)
    return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    SchedulerType sched;
    const std::string name = scheduler;
    if (name == "pf")
      sched = SchedulerType::ProportionalFair;
    else if (name == "et")
      sched = SchedulerType::EqualThroughput;
    else
      throw_validation("scheduler must be pf|et, got '" + name + "'");
    *out_mu_bps = be_baseline(s->cfg, sched);
  });
}

usim_status usim_throughput_cost(double mu_urllc_bps, double mu_be_bps,
                                 double* out_pct) {
  if (!out_pct) return fail(USIM_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out_pct = throughput_cost(mu_urllc_bps, mu_be_bps); });
}

}  // extern "C"
