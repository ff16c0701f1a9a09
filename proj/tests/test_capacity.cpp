// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <limits>

#include "capacity.hpp"
#include "errors.hpp"
#include "scenario.hpp"

using namespace urllcsim;

namespace {

// Deterministic fake link between lambda and outage latency: passes iff
// lambda <= threshold.
ProbeFn threshold_probe(double threshold, int* count = nullptr) {
  return [threshold, count](double lambda, std::uint64_t) -> ProbeOutcome {
    if (count) *count += 1;
    ProbeOutcome out;
    out.samples = 1000000;
    out.pass = lambda <= threshold;
    out.outage_latency_s = out.pass ? 0.5e-3 : 2e-3;
    return out;
  };
}

CapacityQuery query(double lo, double hi, double tol = 0.05) {
  CapacityQuery q;
  q.phi_s = 1e-3;
  q.rho = 1e-2;
  q.lambda_low = lo;
  q.lambda_high = hi;
  q.rel_tolerance = tol;
  q.min_packets = 100000;
  return q;
}

}  // namespace

TEST_CASE("bisection converges to the threshold within tolerance") {
  ScenarioConfig cfg;
  cfg.num_cells = 4;
  cfg.ues_per_cell = 5;
  const double threshold = 137.0;
  const CapacityResult r =
      capacity_search(cfg, query(10, 1000), threshold_probe(threshold));
  CHECK(r.lambda_star <= threshold);
  CHECK(r.lambda_star >= threshold * (1 - 0.05) - 1e-9);
  CHECK(!r.noisy);
  // Eq-1 reporting at the found rate
  CHECK(r.omega_star_bps ==
        doctest::Approx(4.0 * 5 * cfg.payload_bytes * 8 * r.lambda_star));
}

TEST_CASE("a bracket of width 2x needs at most 5 refinement probes at 5%") {
  int count = 0;
  ScenarioConfig cfg;
  const double a = 100.0;
  capacity_search(cfg, query(a, 2 * a), threshold_probe(1.5 * a, &count));
  // two bracket probes, ceil(log2(1/0.05)) = 5 bisections, one confirmation
  CHECK(count <= 2 + 5 + 1);
}

TEST_CASE("an unbounded constraint returns the upper bound") {
  ScenarioConfig cfg;
  const CapacityResult r = capacity_search(
      cfg, query(10, 500), threshold_probe(std::numeric_limits<double>::infinity()));
  CHECK(r.upper_bound_feasible);
  CHECK(r.lambda_star == 500.0);
}

TEST_CASE("failing at the lower bound is infeasible") {
  ScenarioConfig cfg;
  CHECK_THROWS_AS(capacity_search(cfg, query(10, 500), threshold_probe(1.0)),
                  SimError);
  try {
    capacity_search(cfg, query(10, 500), threshold_probe(1.0));
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::Infeasible);
  }
}

TEST_CASE("a packet budget below 100/rho is rejected up front") {
  ScenarioConfig cfg;
  CapacityQuery q = query(10, 500);
  q.rho = 1e-4;           // requires 1e6
  q.min_packets = 100000;  // too small
  try {
    capacity_search(cfg, q, threshold_probe(100));
    FAIL("expected insufficient-samples");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InsufficientSamples);
    CHECK(std::string(e.what()).find("1000000") != std::string::npos);
  }
}

TEST_CASE("query validation") {
  ScenarioConfig cfg;
  CapacityQuery q = query(10, 5);  // inverted bounds
  CHECK_THROWS_AS(capacity_search(cfg, q, threshold_probe(1)), SimError);
  q = query(10, 500, 0.7);  // tolerance out of range
  CHECK_THROWS_AS(capacity_search(cfg, q, threshold_probe(1)), SimError);
}

TEST_CASE("a cross-seed disagreement is retried once, then flagged noisy") {
  ScenarioConfig cfg;

  // Confirmation seed disagrees, the second fresh seed agrees: no flag.
  auto recovers = [](double lambda, std::uint64_t replication) -> ProbeOutcome {
    const double threshold = replication == 1000 ? 50.0 : 300.0;
    ProbeOutcome out;
    out.samples = 1000000;
    out.pass = lambda <= threshold;
    out.outage_latency_s = out.pass ? 0.5e-3 : 2e-3;
    return out;
  };
  const CapacityResult ok = capacity_search(cfg, query(100, 400), recovers);
  CHECK(!ok.noisy);
  CHECK(ok.lambda_star > 280);

  // Both fresh seeds disagree with the search seed: flagged, result kept.
  auto persistent = [](double lambda, std::uint64_t replication) -> ProbeOutcome {
    const double threshold = replication >= 1000 ? 50.0 : 300.0;
    ProbeOutcome out;
    out.samples = 1000000;
    out.pass = lambda <= threshold;
    out.outage_latency_s = out.pass ? 0.5e-3 : 2e-3;
    return out;
  };
  const CapacityResult bad = capacity_search(cfg, query(100, 400), persistent);
  CHECK(bad.noisy);
  CHECK(bad.lambda_star > 280);
}
