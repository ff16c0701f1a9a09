// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "kpi.hpp"
#include "mac.hpp"
#include "topology.hpp"

namespace urllcsim {

// All writers emit a versioned '#' header comment carrying the scenario hash
// and seed, then a column-name row. Formatting is fixed so identical runs
// produce byte-identical files.

void write_ledger_csv(const SimResult& result, const std::string& path);
void write_utilization_csv(const SimResult& result, const std::string& path);

// value,cum_prob at 1000 evenly spaced probabilities plus the exact last ten
// order statistics (tail points).
void write_ecdf_csv(const EcdfAccumulator& acc, const std::string& value_name,
                    const SimResult& result, const std::string& path);

void write_topology_csv(const Topology& topo, const ScenarioConfig& cfg,
                        const std::string& cells_path, const std::string& ues_path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace urllcsim
