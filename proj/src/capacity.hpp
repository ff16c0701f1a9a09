// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>

#include "scenario.hpp"

namespace urllcsim {

// One capacity question: the largest per-UE arrival rate whose outage
// latency at rho stays within phi. The search runs over lambda (the
// generative parameter); the supported load Omega* is derived for reporting.
struct CapacityQuery {
  double phi_s = 1e-3;
  double rho = 1e-2;
  double lambda_low = 1.0;
  double lambda_high = 1000.0;
  double rel_tolerance = 0.05;
  std::uint64_t min_packets = 100000;
};

struct ProbeOutcome {
  bool pass = false;
  std::uint64_t samples = 0;
  double outage_latency_s = 0;  // +inf when insufficient or aborted early
  bool insufficient = false;
};

// A probe evaluates one lambda with a given replication index (common random
// numbers across probes come from reusing the same index).
using ProbeFn = std::function<ProbeOutcome(double lambda, std::uint64_t replication)>;

struct CapacityResult {
  double lambda_star = 0;
  double omega_star_bps = 0;
  int probes = 0;
  bool noisy = false;             // a pass-above-fail persisted after a re-run
  bool upper_bound_feasible = false;  // constraint never bound in the bracket
};

// Bisection on lambda between the query bounds. Throws Infeasible when the
// lower bound already misses the target and InsufficientSamples when
// min_packets cannot certify the requested rho. A probe that passes above an
// observed failure is re-run once with a fresh replication; if the violation
// persists the result is flagged noisy.
CapacityResult capacity_search(const ScenarioConfig& base, const CapacityQuery& query,
                               ProbeFn probe = {});

// Builds the default simulation-backed probe for the given base scenario.
ProbeFn make_simulation_probe(const ScenarioConfig& base, const CapacityQuery& query);

// Mean decoded network throughput of the full-buffer reference case.
double be_baseline(const ScenarioConfig& base, SchedulerType scheduler);

}  // namespace urllcsim
