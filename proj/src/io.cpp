// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace urllcsim {

namespace {

class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : f_(std::fopen(path.c_str(), "w")) {
    if (!f_) throw_io("cannot open for writing: " + path);
  }
  ~CsvFile() {
    if (f_) std::fclose(f_);
  }
  CsvFile(const CsvFile&) = delete;
  CsvFile& operator=(const CsvFile&) = delete;

  void printf(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    va_list args;
    va_start(args, fmt);
    std::vfprintf(f_, fmt, args);
    va_end(args);
  }

 private:
  std::FILE* f_;
};

void header(CsvFile& f, const char* name, const SimResult& r) {
  f.printf("# urllcsim %s v1 scenario=%s seed=%" PRIu64 " replication=%" PRIu64 "\n",
           name, scenario_hash(r.cfg).c_str(), r.cfg.seed, r.cfg.replication);
}

}  // namespace

void write_ledger_csv(const SimResult& result, const std::string& path) {
  CsvFile f(path);
  header(f, "ledger", result);
  f.printf("pkt_id,ue,cell,bytes,t_arrival,t_decoded,latency_s,n_tx,prbs_total,dropped\n");
  for (const PacketRecord& p : result.ledger) {
    f.printf("%" PRIu64 ",%d,%d,%d,%.9f,", p.id, p.ue, p.cell, p.size_bytes,
             p.t_arrival);
    if (p.t_decoded >= 0)
      f.printf("%.9f,%.9f,", p.t_decoded, p.latency_s());
    else if (p.dropped)
      f.printf(",inf,");
    else
      f.printf(",,");  // in flight at horizon
    f.printf("%d,%" PRId64 ",%d\n", p.n_transmissions, p.total_prbs,
             p.dropped ? 1 : 0);
  }
}

void write_utilization_csv(const SimResult& result, const std::string& path) {
  CsvFile f(path);
  header(f, "utilization", result);
  f.printf("tti,t_s,cell,prbs_used,decoded_bits\n");
  const int cells = result.cfg.num_cells;
  const double tti_s = result.cfg.tti_duration_s();
  for (std::int64_t t = 0; t < result.n_ttis; ++t) {
    for (int c = 0; c < cells; ++c) {
      const auto idx = static_cast<std::size_t>(t) * cells + c;
      if (idx >= result.prbs_used.size()) return;
      f.printf("%" PRId64 ",%.9f,%d,%u,%u\n", t, t * tti_s, c,
               static_cast<unsigned>(result.prbs_used[idx]),
               static_cast<unsigned>(result.decoded_bits[idx]));
    }
  }
}

void write_ecdf_csv(const EcdfAccumulator& acc, const std::string& value_name,
                    const SimResult& result, const std::string& path) {
  CsvFile f(path);
  header(f, "ecdf", result);
  f.printf("%s,cum_prob\n", value_name.c_str());
  if (acc.count() == 0) return;
  const auto& s = acc.sorted();
  const auto n = s.size();
  for (int i = 1; i <= 1000; ++i) {
    const double q = i / 1000.0;
    f.printf("%.9g,%.6f\n", acc.quantile(q), q);
  }
  // exact tail points (last ten order statistics)
  const std::size_t tail = n < 10 ? n : 10;
  for (std::size_t i = n - tail; i < n; ++i)
    f.printf("%.9g,%.9f\n", s[i], static_cast<double>(i + 1) / n);
}

void write_topology_csv(const Topology& topo, const ScenarioConfig& cfg,
                        const std::string& cells_path, const std::string& ues_path) {
  {
    CsvFile f(cells_path);
    f.printf("# urllcsim topology-cells v1 scenario=%s\n", scenario_hash(cfg).c_str());
    f.printf("cell_id,x,y,z\n");
    for (std::size_t i = 0; i < topo.cell_pos.size(); ++i)
      f.printf("%zu,%.3f,%.3f,%.3f\n", i, topo.cell_pos[i].x, topo.cell_pos[i].y,
               topo.cell_pos[i].z);
  }
  {
    CsvFile f(ues_path);
    f.printf("# urllcsim topology-ues v1 scenario=%s\n", scenario_hash(cfg).c_str());
    f.printf("ue_id,x,y,z,serving_cell\n");
    for (std::size_t u = 0; u < topo.ue_pos.size(); ++u)
      f.printf("%zu,%.3f,%.3f,%.3f,%d\n", u, topo.ue_pos[u].x, topo.ue_pos[u].y,
               topo.ue_pos[u].z, topo.serving_cell[u]);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot open for writing: " + path);
  out << text;
}

}  // namespace urllcsim
