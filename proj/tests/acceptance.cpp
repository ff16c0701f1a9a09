// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: ten desk-scale criteria covering exact arithmetic,
// latency accounting, link-adaptation calibration, capacity/latency trade-off
// trends, resource-usage distributions, scheduler comparisons, randomized
// system properties and the search oracle. Each criterion prints one
// PASS/FAIL line; thresholds are fixed here, not tunable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "io.hpp"
#include "kpi.hpp"
#include "mac.hpp"
#include "phy.hpp"
#include "scenario.hpp"
#include "topology.hpp"

using namespace urllcsim;

namespace {

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[ACCEPT] %2d %-24s %s  %s\n", idx, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

ScenarioConfig desk_base() {
  ScenarioConfig cfg;
  cfg.num_cells = 4;
  cfg.ues_per_cell = 5;
  cfg.fading_prb_correlated = true;  // wideband fading keeps probes fast
  cfg.warmup_ttis = 2000;
  return cfg;
}

CapacityResult search(const ScenarioConfig& cfg, double phi_ms, double rho,
                      double lo, double hi) {
  CapacityQuery q;
  q.phi_s = phi_ms * 1e-3;
  q.rho = rho;
  q.lambda_low = lo;
  q.lambda_high = hi;
  q.rel_tolerance = 0.05;
  q.min_packets = 100000;
  return capacity_search(cfg, q);
}

constexpr double kSymbol = 0.0005 / 14;

}  // namespace

TEST_CASE("criterion 1: load and cost arithmetic is exact") {
  ScenarioConfig cfg;
  cfg.num_cells = 12;
  cfg.ues_per_cell = 10;
  cfg.payload_bytes = 1500;
  cfg.arrival_rate_pps = 10;
  const double omega = cfg.offered_load_bps();
  const double psi_a = throughput_cost(2.03, 93.0);
  const double psi_b = throughput_cost(71.06, 93.0);
  const bool pass = omega == 14.4e6 && std::abs(psi_a - 97.82) <= 0.01 &&
                    std::abs(psi_b - 23.59) <= 0.01;
  report(1, "eq-exactness", pass,
         fmt("omega=%.1f Mbps psi=%.4f%%/%.4f%%", omega / 1e6, psi_a, psi_b));
  CHECK(omega == 14.4e6);
  CHECK(psi_a == doctest::Approx(97.82).epsilon(1.1e-4));
  CHECK(psi_b == doctest::Approx(23.59).epsilon(4.3e-4));
}

TEST_CASE("criterion 2: latency floor and the quiet-packet quantum") {
  const double floor = 11.0 * kSymbol;  // 392.857 us
  const double tti = 4.0 * kSymbol;     // 142.857 us alignment quantum

  // busy run: no packet may beat the floor
  ScenarioConfig busy = desk_base();
  busy.arrival_rate_pps = 500;
  busy.sim_time_s = 0.6;
  busy.warmup_ttis = 0;
  const SimResult busy_r = run_simulation(busy);
  double min_lat = 1e9;
  for (const auto& p : busy_r.ledger)
    if (p.t_decoded >= 0) min_lat = std::min(min_lat, p.latency_s());

  // quiet high-SINR single-UE run: floor plus at most one TTI of alignment
  ScenarioConfig quiet;
  quiet.num_cells = 1;
  quiet.ues_per_cell = 1;
  quiet.arrival_rate_pps = 30;
  quiet.sim_time_s = 0.4;
  quiet.warmup_ttis = 0;
  quiet.fading = false;
  quiet.shadowing_sigma_db = 0;
  const SimResult quiet_r = run_simulation(quiet);
  double quiet_max = 0, quiet_min = 1e9;
  std::uint64_t quiet_n = 0;
  for (const auto& p : quiet_r.ledger)
    if (p.t_decoded >= 0) {
      quiet_max = std::max(quiet_max, p.latency_s());
      quiet_min = std::min(quiet_min, p.latency_s());
      quiet_n += 1;
    }

  const bool pass = busy_r.decoded > 1000 && min_lat >= floor - 1e-12 &&
                    quiet_n > 0 && quiet_min >= floor - 1e-12 &&
                    quiet_max <= floor + tti + 1e-12;
  report(2, "latency-floor", pass,
         fmt("min=%.2f us (floor %.2f), quiet in [%.2f, %.2f] us", min_lat * 1e6,
             floor * 1e6, quiet_min * 1e6, quiet_max * 1e6));
  CHECK(min_lat >= floor - 1e-12);
  CHECK(quiet_min >= floor - 1e-12);
  CHECK(quiet_max <= floor + tti + 1e-12);
}

TEST_CASE("criterion 3: link-adaptation calibration under ideal CQI") {
  // Interference-free cell, wideband fading tracked by a per-TTI zero-delay
  // CQI; transmit power places the links mid-table so quantization is the
  // only slack against the 1% target.
  ScenarioConfig cfg;
  cfg.num_cells = 1;
  cfg.ues_per_cell = 10;
  cfg.payload_bytes = 50;
  cfg.arrival_rate_pps = 40;
  cfg.tx_power_dbm = -11.0;
  cfg.shadowing_sigma_db = 0.0;
  cfg.fading_prb_correlated = true;
  cfg.cqi_period_ttis = 1;
  cfg.cqi_delay_ttis = 0;
  cfg.warmup_ttis = 2000;
  cfg.max_decoded_packets = 110000;
  cfg.sim_time_s = 500.0;
  EngineOptions opts;
  opts.record_usage = false;
  const SimResult r = run_simulation(cfg, opts);
  const double bler = r.realized_first_tx_bler();
  const bool pass = r.first_tx >= 100000 && bler >= 0.002 && bler <= 0.012;
  report(3, "bler-calibration", pass,
         fmt("first_tx=%llu realized=%.4f%% target-band [0.2%%, 1.2%%]",
             static_cast<unsigned long long>(r.first_tx), bler * 100));
  CHECK(r.first_tx >= 100000);
  CHECK(bler >= 0.002);
  CHECK(bler <= 0.012);
}

TEST_CASE("criterion 4: capacity grows with the latency budget") {
  ScenarioConfig cfg = desk_base();
  cfg.payload_bytes = 1500;
  const CapacityResult r1 = search(cfg, 1.0, 1e-2, 10, 640);
  const CapacityResult r3 = search(cfg, 3.0, 1e-2, 10, 1280);
  const CapacityResult r10 = search(cfg, 10.0, 1e-2, 10, 1280);
  const double ratio = r10.omega_star_bps / r1.omega_star_bps;
  const bool pass = r10.omega_star_bps >= r3.omega_star_bps &&
                    r3.omega_star_bps >= r1.omega_star_bps && ratio >= 2.0;
  report(4, "latency-budget-trend", pass,
         fmt("omega*(1/3/10 ms) = %.2f / %.2f / %.2f Mbps, 10ms/1ms = %.2fx",
             r1.omega_star_bps / 1e6, r3.omega_star_bps / 1e6,
             r10.omega_star_bps / 1e6, ratio));
  CHECK(r10.omega_star_bps >= r3.omega_star_bps);
  CHECK(r3.omega_star_bps >= r1.omega_star_bps);
  CHECK(ratio >= 2.0);
}

TEST_CASE("criterion 5: capacity grows with the outage allowance") {
  // The 1 ms budget admits no retransmission, so the outage level is pitted
  // directly against the residual error floor; a 1e-3 link-adaptation target
  // keeps both outage points feasible on one config.
  ScenarioConfig cfg = desk_base();
  cfg.payload_bytes = 50;
  cfg.bler_target = 1e-3;
  const CapacityResult loose = search(cfg, 1.0, 1e-2, 25, 3200);
  const CapacityResult tight = search(cfg, 1.0, 1e-3, 25, 3200);
  const double ratio = loose.omega_star_bps / tight.omega_star_bps;
  const bool pass = ratio >= 1.2;
  report(5, "outage-trend", pass,
         fmt("omega*(rho 1e-2) = %.2f Mbps, omega*(rho 1e-3) = %.2f Mbps, %.2fx",
             loose.omega_star_bps / 1e6, tight.omega_star_bps / 1e6, ratio));
  CHECK(ratio >= 1.2);
}

TEST_CASE("criterion 6: small payloads support more load at 1 ms") {
  // Single cell isolates the granularity mechanism: 50 B blocks co-schedule
  // ~25 packets per TTI while 1500 B blocks serialize at 1-2 per TTI.
  ScenarioConfig cfg;
  cfg.num_cells = 1;
  cfg.ues_per_cell = 10;
  cfg.fading_prb_correlated = true;
  cfg.warmup_ttis = 2000;

  ScenarioConfig small = cfg;
  small.payload_bytes = 50;
  ScenarioConfig large = cfg;
  large.payload_bytes = 1500;
  const CapacityResult rs = search(small, 1.0, 1e-2, 1000, 64000);
  const CapacityResult rl = search(large, 1.0, 1e-2, 10, 3200);
  const double ratio = rs.omega_star_bps / rl.omega_star_bps;
  const bool pass = ratio >= 1.2;
  report(6, "payload-trend", pass,
         fmt("omega*(50 B) = %.2f Mbps, omega*(1500 B) = %.2f Mbps, %.2fx",
             rs.omega_star_bps / 1e6, rl.omega_star_bps / 1e6, ratio));
  CHECK(ratio >= 1.2);
}

TEST_CASE("criterion 7: PRBs per packet, medians and the segmented tail") {
  auto run_at = [](int payload, double lambda) {
    ScenarioConfig cfg = desk_base();
    cfg.payload_bytes = payload;
    cfg.arrival_rate_pps = lambda;
    cfg.max_decoded_packets = 60000;
    cfg.sim_time_s = 2000.0;
    EngineOptions o;
    o.record_usage = false;
    return run_simulation(cfg, o);
  };
  // loads near the supported operating points: 50 B near its 1 ms capacity,
  // 1500 B near its 3 ms capacity (the saturated regime of the tail plots)
  const SimResult rs = run_at(50, 650);
  const SimResult rl = run_at(1500, 150);
  const EcdfAccumulator es = prb_ecdf(rs);
  const EcdfAccumulator el = prb_ecdf(rl);
  const double med_small = es.quantile(0.5);
  const double med_large = el.quantile(0.5);
  const double p95_large = el.quantile(0.95);
  const bool pass = med_large >= 10 * med_small && p95_large > 100;
  report(7, "prb-distribution", pass,
         fmt("median 1500B/50B = %.0f/%.0f PRBs, p95(1500B) = %.0f of 100",
             med_large, med_small, p95_large));
  CHECK(med_large >= 10 * med_small);
  CHECK(p95_large > 100);
}

TEST_CASE("criterion 8: equal-throughput scheduling costs capacity") {
  ScenarioConfig cfg = desk_base();
  cfg.fading_prb_correlated = false;  // frequency-selective fading, full model
  cfg.sim_time_s = 4.0;
  const double pf = be_baseline(cfg, SchedulerType::ProportionalFair);
  const double et = be_baseline(cfg, SchedulerType::EqualThroughput);
  const double gap = (1.0 - et / pf) * 100.0;
  const bool pass = et < pf && gap >= 5.0;
  report(8, "scheduler-trend", pass,
         fmt("mu_BE(PF) = %.2f Mbps, mu_BE(ET) = %.2f Mbps, gap = %.1f%%",
             pf / 1e6, et / 1e6, gap));
  CHECK(et < pf);
  CHECK(gap >= 5.0);
}

TEST_CASE("criterion 9: randomized property suites") {
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool quantile_ok = true, psi_ok = true, bler_ok = true, interference_ok = true;
  bool conservation_ok = true, work_ok = true, determinism_ok = true;

  // quantile monotonicity in rho, 1000 random ECDFs
  for (int it = 0; it < 1000 && quantile_ok; ++it) {
    EcdfAccumulator acc;
    const int n = 200 + static_cast<int>(unit(rng) * 2000);
    for (int i = 0; i < n; ++i) acc.add(unit(rng) * 10);
    double rho1 = 0.02 + unit(rng) * 0.4;
    double rho2 = rho1 + unit(rng) * 0.4;
    quantile_ok = acc.quantile(1 - rho1) >= acc.quantile(1 - rho2);
  }

  // psi monotone decreasing in mu_urllc, range (-inf, 100]
  for (int it = 0; it < 1000 && psi_ok; ++it) {
    const double be = 1e3 + unit(rng) * 1e8;
    const double a = unit(rng) * 2 * be;
    const double b = a + unit(rng) * be + 1;
    psi_ok = throughput_cost(b, be) < throughput_cost(a, be) &&
             throughput_cost(a, be) <= 100.0;
  }

  // finite-blocklength error model monotone in SINR and payload
  const McsTable table = McsTable::builtin_nr15();
  for (int it = 0; it < 1000 && bler_ok; ++it) {
    const McsEntry& e = table.at(static_cast<int>(unit(rng) * table.size()));
    const std::int64_t n_re = 36 + static_cast<std::int64_t>(unit(rng) * 3600);
    const std::int64_t bits = 24 + static_cast<std::int64_t>(unit(rng) * 4000);
    const double s = std::pow(10.0, unit(rng) * 4 - 1.5);
    bler_ok = bler(s * 1.25, bits, n_re, e) <= bler(s, bits, n_re, e) + 1e-15 &&
              bler(s, bits + 64, n_re, e) >= bler(s, bits, n_re, e) - 1e-15;
  }

  // adding an interferer never helps
  for (int it = 0; it < 1000 && interference_ok; ++it) {
    std::vector<Interferer> ifs;
    const int k = static_cast<int>(unit(rng) * 4);
    for (int j = 0; j < k; ++j)
      ifs.push_back({unit(rng) * 5 + 0.01, std::pow(10.0, -unit(rng) * 9 - 3), unit(rng) * 2});
    const double p = unit(rng) * 10 + 0.1;
    const double g = std::pow(10.0, -unit(rng) * 9 - 3);
    const double n = std::pow(10.0, -unit(rng) * 3 - 9);
    const double before = sinr_per_prb(p, g, 1.0, 2.0, ifs, n);
    ifs.push_back({unit(rng) * 5 + 0.01, std::pow(10.0, -unit(rng) * 9 - 3), unit(rng) + 0.1});
    interference_ok = sinr_per_prb(p, g, 1.0, 2.0, ifs, n) <= before;
  }

  // conservation, work conservation and bit-exact determinism over 10 seeds
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioConfig cfg;
    cfg.num_cells = 2;
    cfg.ues_per_cell = 3;
    cfg.arrival_rate_pps = 300 + 40 * seed;
    cfg.payload_bytes = seed % 2 ? 50 : 1500;
    cfg.sim_time_s = 0.35;
    cfg.warmup_ttis = 0;
    cfg.seed = seed;

    Engine eng(cfg);
    while (!eng.finished()) {
      const std::int64_t backlog = eng.eligible_backlog();
      eng.step();
      if (backlog > 0 && eng.last_tti_grants().empty()) {
        bool all_tight = true;
        for (int c = 0; c < cfg.num_cells; ++c)
          all_tight = all_tight && eng.free_prbs_last_tti(c) < 8;
        work_ok = work_ok && all_tight;
      }
    }
    const SimResult r = eng.finalize();
    conservation_ok = conservation_ok &&
                      r.generated == r.decoded + r.dropped + r.inflight;

    const SimResult again = run_simulation(cfg);
    write_ledger_csv(r, "accept_det_a.csv");
    write_ledger_csv(again, "accept_det_b.csv");
    determinism_ok = determinism_ok && read_text_file("accept_det_a.csv") ==
                                           read_text_file("accept_det_b.csv");
  }
  std::remove("accept_det_a.csv");
  std::remove("accept_det_b.csv");

  const bool pass = quantile_ok && psi_ok && bler_ok && interference_ok &&
                    conservation_ok && work_ok && determinism_ok;
  report(9, "property-suites", pass,
         fmt("quantile=%d psi=%d bler=%d interference=%d conservation=%d "
             "work=%d determinism=%d",
             quantile_ok, psi_ok, bler_ok, interference_ok, conservation_ok,
             work_ok, determinism_ok));
  CHECK(quantile_ok);
  CHECK(psi_ok);
  CHECK(bler_ok);
  CHECK(interference_ok);
  CHECK(conservation_ok);
  CHECK(work_ok);
  CHECK(determinism_ok);
}

TEST_CASE("criterion 10: bisection agrees with an exhaustive grid") {
  ScenarioConfig cfg = desk_base();
  cfg.payload_bytes = 50;
  const CapacityQuery q = [] {
    CapacityQuery v;
    v.phi_s = 1e-3;
    v.rho = 1e-2;
    v.lambda_low = 100;
    v.lambda_high = 3200;
    v.rel_tolerance = 0.05;
    v.min_packets = 100000;
    return v;
  }();
  const CapacityResult bis = capacity_search(cfg, q);

  // 10-point geometric grid around the bisection answer, same seeds (the
  // probes are deterministic functions of lambda under common random
  // numbers); spacing 3.62% is finer than the 5% search tolerance.
  ProbeFn probe = make_simulation_probe(cfg, q);
  const double lo = 0.85 * bis.lambda_star, hi = 1.17 * bis.lambda_star;
  const double step = std::pow(hi / lo, 1.0 / 9.0);
  double grid_best = -1;
  std::vector<std::string> marks;
  for (int i = 0; i < 10; ++i) {
    const double lambda = lo * std::pow(step, i);
    const bool pass = probe(lambda, cfg.replication).pass;
    if (pass) grid_best = lambda;
    marks.push_back(fmt("%.0f:%s", lambda, pass ? "P" : "F"));
  }
  REQUIRE(grid_best > 0);
  const double rel = std::abs(bis.lambda_star - grid_best) / grid_best;
  // both estimates sit within one tolerance below the true boundary, so they
  // can differ by at most the 5% tolerance (plus rounding)
  const bool pass = rel <= 0.0501;
  std::string grid_str;
  for (const auto& m : marks) grid_str += m + " ";
  report(10, "search-oracle", pass,
         fmt("bisect lambda*=%.0f grid best=%.0f rel-diff=%.2f%%", bis.lambda_star,
             grid_best, rel * 100));
  CHECK(rel <= 0.0501);
}
