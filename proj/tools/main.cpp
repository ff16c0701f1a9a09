// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Operator CLI for the urllcsim shared library: single runs, best-effort
// baselines, capacity searches, parameter sweeps and plot-data dumps.
// Exit codes: 0 ok, 1 usage, 2 scenario validation/parse, 3 analysis flag
// (infeasible query, insufficient samples).
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "urllcsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitAnalysis = 3;

struct ScenarioDeleter {
  void operator()(usim_scenario* s) const { usim_scenario_free(s); }
};
struct ResultDeleter {
  void operator()(usim_result* r) const { usim_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<usim_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<usim_result, ResultDeleter>;

[[noreturn]] void die(int code, const std::string& msg) {
  std::fprintf(stderr, "urllcsim: %s\n", msg.c_str());
  std::exit(code);
}

int exit_code_for(usim_status st) {
  switch (st) {
    case USIM_OK: return kExitOk;
    case USIM_ERR_PARSE:
    case USIM_ERR_VALIDATION:
    case USIM_ERR_MISUSE: return kExitValidation;
    case USIM_ERR_INFEASIBLE:
    case USIM_ERR_INSUFFICIENT_SAMPLES: return kExitAnalysis;
    default: return kExitValidation;
  }
}

void check(usim_status st) {
  if (st != USIM_OK) die(exit_code_for(st), usim_last_error());
}

ScenarioPtr load_scenario_or_die(const std::string& path,
                                 const std::vector<std::string>& sets) {
  usim_scenario* s = nullptr;
  if (path.empty()) {
    check(usim_scenario_create(&s));
  } else {
    check(usim_scenario_load_file(path.c_str(), &s));
  }
  ScenarioPtr out(s);
  for (const std::string& kv : sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos)
      die(kExitUsage, "--set expects key=value, got '" + kv + "'");
    check(usim_scenario_set(out.get(), kv.substr(0, eq).c_str(),
                            kv.substr(eq + 1).c_str()));
  }
  return out;
}

std::string hash_of(const usim_scenario* s) {
  char buf[32];
  check(usim_scenario_hash(s, buf, sizeof(buf)));
  return buf;
}

std::string get(const usim_scenario* s, const char* key) {
  char buf[256];
  check(usim_scenario_get(s, key, buf, sizeof(buf)));
  return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(kExitValidation, "cannot write " + path);
  out << text;
}

int worker_count(size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("URLLCSIM_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  if (n > jobs) n = static_cast<unsigned>(jobs);
  return static_cast<int>(n ? n : 1);
}

std::vector<double> parse_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      die(kExitUsage, std::string("bad ") + what + " value: '" + cell + "'");
    }
  }
  if (out.empty()) die(kExitUsage, std::string("empty ") + what + " list");
  return out;
}

struct CapacityArgs {
  double phi_ms = 1.0;
  double rho = 1e-2;
  double lambda_low = 1.0;
  double lambda_high = 10000.0;
  double tol = 0.05;
  std::uint64_t min_packets = 100000;
};

usim_capacity_query make_query(const CapacityArgs& a, double phi_ms, double rho) {
  usim_capacity_query q{};
  q.phi_s = phi_ms * 1e-3;
  q.rho = rho;
  q.lambda_low = a.lambda_low;
  q.lambda_high = a.lambda_high;
  q.rel_tolerance = a.tol;
  q.min_packets = a.min_packets;
  return q;
}

int cmd_run(const std::string& scenario, const std::vector<std::string>& sets,
            const std::string& out_dir, const std::vector<double>& rhos,
            bool dump_topology) {
  ScenarioPtr s = load_scenario_or_die(scenario, sets);
  usim_result* raw = nullptr;
  check(usim_run(s.get(), &raw));
  ResultPtr r(raw);

  char* json = nullptr;
  check(usim_result_kpi_json(r.get(), rhos.empty() ? nullptr : rhos.data(),
                             rhos.size(), &json));
  write_file(join_path(out_dir, "kpi.json"), json);
  usim_string_free(json);

  check(usim_result_write_ledger_csv(r.get(), join_path(out_dir, "ledger.csv").c_str()));
  check(usim_result_write_utilization_csv(
      r.get(), join_path(out_dir, "utilization.csv").c_str()));
  if (dump_topology) {
    check(usim_scenario_write_topology_csv(
        s.get(), join_path(out_dir, "topology_cells.csv").c_str(),
        join_path(out_dir, "topology_ues.csv").c_str()));
  }

  usim_kpi kpi{};
  check(usim_result_kpi(r.get(), &kpi));
  std::printf("run scenario=%s seed=%s mu_mbps=%.4f packets=%llu drop_rate=%.3g bler=%.3g\n",
              hash_of(s.get()).c_str(), get(s.get(), "seed").c_str(),
              kpi.mu_bps / 1e6, static_cast<unsigned long long>(kpi.n_packets),
              kpi.drop_rate, kpi.realized_bler);
  return kExitOk;
}

int cmd_baseline(const std::string& scenario, const std::vector<std::string>& sets,
                 const std::string& out_dir, const std::string& scheduler) {
  ScenarioPtr s = load_scenario_or_die(scenario, sets);
  const std::string sched = scheduler.empty() ? get(s.get(), "scheduler") : scheduler;
  double mu = 0;
  check(usim_be_baseline(s.get(), sched.c_str(), &mu));
  std::ostringstream json;
  json << "{\n  \"scenario_hash\": \"" << hash_of(s.get()) << "\",\n"
       << "  \"seed\": " << get(s.get(), "seed") << ",\n"
       << "  \"scheduler\": \"" << sched << "\",\n"
       << "  \"mu_be_bps\": " << mu << "\n}\n";
  write_file(join_path(out_dir, "baseline.json"), json.str());
  std::printf("baseline scenario=%s scheduler=%s mu_be_mbps=%.4f\n",
              hash_of(s.get()).c_str(), sched.c_str(), mu / 1e6);
  return kExitOk;
}

int cmd_capacity(const std::string& scenario, const std::vector<std::string>& sets,
                 const std::string& out_dir, const CapacityArgs& args) {
  ScenarioPtr s = load_scenario_or_die(scenario, sets);
  const usim_capacity_query q = make_query(args, args.phi_ms, args.rho);
  usim_capacity_result res{};
  const usim_status st = usim_capacity_search(s.get(), &q, &res);
  if (st != USIM_OK) die(exit_code_for(st), usim_last_error());

  std::ostringstream json;
  json << "{\n  \"scenario_hash\": \"" << hash_of(s.get()) << "\",\n"
       << "  \"seed\": " << get(s.get(), "seed") << ",\n"
       << "  \"phi_ms\": " << args.phi_ms << ",\n"
       << "  \"rho\": " << args.rho << ",\n"
       << "  \"lambda_star_pps\": " << res.lambda_star << ",\n"
       << "  \"omega_star_mbps\": " << res.omega_star_bps / 1e6 << ",\n"
       << "  \"probes\": " << res.probes << ",\n"
       << "  \"noisy\": " << (res.noisy ? "true" : "false") << ",\n"
       << "  \"upper_bound_feasible\": " << (res.upper_bound_feasible ? "true" : "false")
       << "\n}\n";
  write_file(join_path(out_dir, "capacity.json"), json.str());
  std::printf("capacity scenario=%s phi_ms=%g rho=%g omega_star_mbps=%.4f lambda_star=%.2f%s\n",
              hash_of(s.get()).c_str(), args.phi_ms, args.rho,
              res.omega_star_bps / 1e6, res.lambda_star,
              res.noisy ? " (noisy)" : "");
  return kExitOk;
}

int cmd_plotdata(const std::string& scenario, const std::vector<std::string>& sets,
                 const std::string& out_dir) {
  ScenarioPtr s = load_scenario_or_die(scenario, sets);
  usim_result* raw = nullptr;
  check(usim_run(s.get(), &raw));
  ResultPtr r(raw);
  check(usim_result_write_latency_ecdf_csv(
      r.get(), join_path(out_dir, "ecdf_latency.csv").c_str()));
  check(usim_result_write_prb_ecdf_csv(r.get(),
                                       join_path(out_dir, "ecdf_prb.csv").c_str()));
  std::printf("plotdata scenario=%s wrote ecdf_latency.csv ecdf_prb.csv\n",
              hash_of(s.get()).c_str());
  return kExitOk;
}

struct SweepCell {
  double phi_ms = 0;
  double rho = 0;
  double payload = 0;
  size_t sched_index = 0;
  std::string scheduler;
  double omega_mbps = 0;
  double psi_pct = 0;
  bool noisy = false;
  bool unbounded = false;
  usim_status status = USIM_OK;
};

int cmd_sweep(const std::string& scenario, const std::vector<std::string>& sets,
              const std::string& out_dir, const CapacityArgs& args,
              const std::string& phi_csv, const std::string& rho_csv,
              const std::string& payload_csv, const std::string& sched_csv) {
  const std::vector<double> phis = parse_list(phi_csv, "phi-ms");
  const std::vector<double> rhos = parse_list(rho_csv, "rho");
  const std::vector<double> payloads = parse_list(payload_csv, "payload");
  std::vector<std::string> schedulers;
  {
    std::stringstream ss(sched_csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell != "pf" && cell != "et")
        die(kExitUsage, "scheduler must be pf or et, got '" + cell + "'");
      schedulers.push_back(cell);
    }
    if (schedulers.empty()) die(kExitUsage, "empty scheduler list");
  }

  // Validate the base scenario once up front.
  const std::string base_hash = hash_of(load_scenario_or_die(scenario, sets).get());

  // Best-effort baselines, one per scheduler (psi is relative to the same
  // scheduler's full-buffer reference).
  std::vector<double> mu_be(schedulers.size(), 0.0);
  for (size_t i = 0; i < schedulers.size(); ++i) {
    ScenarioPtr s = load_scenario_or_die(scenario, sets);
    check(usim_be_baseline(s.get(), schedulers[i].c_str(), &mu_be[i]));
  }

  std::vector<SweepCell> cells;
  for (size_t si = 0; si < schedulers.size(); ++si)
    for (double phi : phis)
      for (double rho : rhos)
        for (double payload : payloads) {
          SweepCell c;
          c.phi_ms = phi;
          c.rho = rho;
          c.payload = payload;
          c.sched_index = si;
          c.scheduler = schedulers[si];
          cells.push_back(c);
        }

  std::atomic<size_t> next{0};
  const int workers = worker_count(cells.size());
  std::vector<std::thread> pool;
  std::mutex io_mutex;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& c = cells[i];
      ScenarioPtr s;
      {
        // scenario loading touches the filesystem; keep it serialized
        std::lock_guard<std::mutex> lock(io_mutex);
        s = load_scenario_or_die(scenario, sets);
      }
      char payload_txt[32];
      std::snprintf(payload_txt, sizeof(payload_txt), "%.0f", c.payload);
      if (usim_scenario_set(s.get(), "payload_B", payload_txt) != USIM_OK ||
          usim_scenario_set(s.get(), "scheduler", c.scheduler.c_str()) != USIM_OK) {
        c.status = USIM_ERR_VALIDATION;
        continue;
      }
      const usim_capacity_query q = make_query(args, c.phi_ms, c.rho);
      usim_capacity_result res{};
      c.status = usim_capacity_search(s.get(), &q, &res);
      if (c.status == USIM_OK) {
        c.omega_mbps = res.omega_star_bps / 1e6;
        c.noisy = res.noisy != 0;
        c.unbounded = res.upper_bound_feasible != 0;
        double psi = 0;
        if (usim_throughput_cost(res.omega_star_bps, mu_be[c.sched_index], &psi) ==
            USIM_OK)
          c.psi_pct = psi;
      }
    }
  };
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "# urllcsim sweep v1 scenario=" << base_hash << "\n";
  csv << "phi_ms,rho,payload_B,scheduler,omega_star_mbps,psi_pct,status\n";
  for (const SweepCell& c : cells) {
    csv << c.phi_ms << "," << c.rho << "," << c.payload << "," << c.scheduler << ",";
    switch (c.status) {
      case USIM_OK: {
        char val[64];
        std::snprintf(val, sizeof(val), "%.6f,%.4f", c.omega_mbps, c.psi_pct);
        csv << val << ","
            << (c.noisy ? "noisy" : (c.unbounded ? "unbounded" : "ok"));
        break;
      }
      case USIM_ERR_INFEASIBLE: csv << ",,infeasible"; break;
      case USIM_ERR_INSUFFICIENT_SAMPLES: csv << ",,insufficient_samples"; break;
      default: csv << ",,error"; break;
    }
    csv << "\n";
  }
  write_file(join_path(out_dir, "sweep.csv"), csv.str());
  std::printf("sweep scenario=%s cells=%zu workers=%d -> sweep.csv\n",
              base_hash.c_str(), cells.size(), workers);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"urllcsim: downlink URLLC/eMBB coexistence simulator and capacity harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(usim_version()));

  std::string scenario_path;
  std::vector<std::string> sets;
  std::string out_dir = ".";
  app.add_option("--scenario", scenario_path, "Scenario file (key = value lines)");
  app.add_option("--set", sets, "Override, key=value; applied after the file")
      ->take_all();
  app.add_option("--out", out_dir, "Output directory (default .)");

  CapacityArgs cap;
  auto add_capacity_opts = [&](CLI::App* cmd, bool single) {
    if (single) {
      cmd->add_option("--phi-ms", cap.phi_ms, "Latency target, ms");
      cmd->add_option("--rho", cap.rho, "Outage probability");
    }
    cmd->add_option("--lambda-low", cap.lambda_low, "Lower search bound, packets/s per UE");
    cmd->add_option("--lambda-high", cap.lambda_high, "Upper search bound, packets/s per UE");
    cmd->add_option("--tol", cap.tol, "Relative bracket tolerance");
    cmd->add_option("--min-packets", cap.min_packets, "Decoded packets per probe");
  };

  auto* run = app.add_subcommand("run", "One simulation: ledger + KPI JSON");
  std::vector<double> run_rhos;
  bool dump_topology = false;
  run->add_option("--rho", run_rhos, "Outage probabilities for the KPI report")
      ->take_all();
  run->add_flag("--dump-topology", dump_topology, "Also write topology CSVs");

  auto* baseline = app.add_subcommand("baseline", "Best-effort reference throughput");
  std::string baseline_sched;
  baseline->add_option("--scheduler", baseline_sched, "pf or et (default: scenario)");

  auto* capacity = app.add_subcommand("capacity", "Max supported load for one (phi, rho)");
  add_capacity_opts(capacity, true);

  auto* sweep = app.add_subcommand("sweep", "Capacity grid over phi/rho/payload/scheduler");
  std::string phi_csv = "1", rho_csv = "0.01", payload_csv = "50,1500", sched_csv = "pf";
  sweep->add_option("--phi-ms", phi_csv, "Comma list of latency targets, ms");
  sweep->add_option("--rho", rho_csv, "Comma list of outage probabilities");
  sweep->add_option("--payload", payload_csv, "Comma list of payload sizes, bytes");
  sweep->add_option("--scheduler", sched_csv, "Comma list of schedulers (pf,et)");
  add_capacity_opts(sweep, false);

  auto* plotdata = app.add_subcommand("plotdata", "Latency and PRB ECDF CSVs");

  // --scenario/--set/--out may follow the subcommand name
  for (CLI::App* sub : {run, baseline, capacity, sweep, plotdata})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed())
    return cmd_run(scenario_path, sets, out_dir, run_rhos, dump_topology);
  if (baseline->parsed())
    return cmd_baseline(scenario_path, sets, out_dir, baseline_sched);
  if (capacity->parsed()) return cmd_capacity(scenario_path, sets, out_dir, cap);
  if (sweep->parsed())
    return cmd_sweep(scenario_path, sets, out_dir, cap, phi_csv, rho_csv,
                     payload_csv, sched_csv);
  if (plotdata->parsed()) return cmd_plotdata(scenario_path, sets, out_dir);
  return kExitUsage;
}
