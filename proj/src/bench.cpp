// Copyright 2026 The mpsqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpsqc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mpsqc {
namespace {

constexpr std::array<std::string_view, 3> kBackendNames = {"automatic", "dense", "mps"};

CacheBackend parse_backend(const std::string& s) {
  for (std::size_t i = 0; i < kBackendNames.size(); ++i) {
    if (kBackendNames[i] == s) return static_cast<CacheBackend>(i);
  }
  throw std::invalid_argument("unknown cache backend '" + s + "'");
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

struct Cell {
  std::size_t target;
  ProtocolKind kind;
  int sweeps;
  std::uint64_t seed;
};

struct CellOutcome {
  std::optional<DecompositionReport> report;
  std::string error;
};

}  // namespace

void BenchmarkPlan::validate() const {
  if (targets.empty()) throw std::invalid_argument("plan has no targets");
  if (kinds.empty()) throw std::invalid_argument("plan has no protocol kinds");
  if (sweeps.empty()) throw std::invalid_argument("plan has no sweep settings");
  if (seeds.empty()) throw std::invalid_argument("plan has no seeds");
  if (k_min < 1 || k_max < k_min) {
    throw std::invalid_argument("invalid depth range " + std::to_string(k_min) + ".." +
                                std::to_string(k_max));
  }
  for (int t : sweeps) {
    if (t < 1) throw std::invalid_argument("sweep counts must be positive");
  }
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    throw std::invalid_argument("learning rate must lie in [0, 1]");
  }
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

nlohmann::json to_json(const BenchmarkPlan& plan) {
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : plan.targets) targets.push_back(to_json(t));
  std::vector<std::string> kinds;
  for (auto k : plan.kinds) kinds.emplace_back(protocol_name(k));
  return {{"targets", targets},
          {"protocols", kinds},
          {"k_min", plan.k_min},
          {"k_max", plan.k_max},
          {"sweeps", plan.sweeps},
          {"learning_rate", plan.learning_rate},
          {"seeds", plan.seeds},
          {"budget_matching", plan.budget_matching},
          {"threads", plan.threads},
          {"save_circuits", plan.save_circuits},
          {"backend", kBackendNames[static_cast<std::size_t>(plan.backend)]},
          {"output_dir", plan.output_dir.string()}};
}

BenchmarkPlan plan_from_json(const nlohmann::json& j) {
  BenchmarkPlan p;
  for (const auto& t : j.at("targets")) p.targets.push_back(descriptor_from_json(t));
  if (j.contains("protocols")) {
    for (const auto& k : j.at("protocols")) p.kinds.push_back(parse_protocol(k.get<std::string>()));
  } else {
    p.kinds.assign(kAllProtocols.begin(), kAllProtocols.end());
  }
  p.k_min = j.value("k_min", p.k_min);
  p.k_max = j.value("k_max", p.k_max);
  p.sweeps = j.value("sweeps", p.sweeps);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.seeds = j.value("seeds", p.seeds);
  p.budget_matching = j.value("budget_matching", p.budget_matching);
  p.threads = j.value("threads", p.threads);
  p.save_circuits = j.value("save_circuits", p.save_circuits);
  p.backend = parse_backend(j.value("backend", std::string("automatic")));
  p.output_dir = j.value("output_dir", p.output_dir.string());
  p.validate();
  return p;
}

BenchmarkPlan load_plan(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open plan file " + path.string());
  return plan_from_json(nlohmann::json::parse(is));
}

std::string cell_name(const std::string& target_id, ProtocolKind kind, int sweeps,
                      std::uint64_t seed) {
  return target_id + "__" + std::string(protocol_name(kind)) + "__T" + std::to_string(sweeps) +
         "__s" + std::to_string(seed);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
  os << "target,kind,K,T,seed,infidelity,updates,seconds\n";
  for (const auto& r : rows) {
    os << r.target << ',' << protocol_name(r.kind) << ',' << r.k << ',' << r.sweeps << ','
       << r.seed << ',' << format_number(r.infidelity) << ',' << r.updates << ','
       << format_number(r.seconds) << '\n';
  }
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan, std::ostream* log) {
  plan.validate();
  namespace fs = std::filesystem;
  const fs::path out = plan.output_dir;
  fs::create_directories(out / "reports");
  fs::create_directories(out / "targets");
  if (plan.save_circuits) fs::create_directories(out / "circuits");

  std::mutex log_mutex;
  auto say = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    *log << msg << '\n' << std::flush;
  };

  std::vector<std::optional<Target>> targets(plan.targets.size());
  std::vector<std::string> target_errors(plan.targets.size());
  std::vector<std::string> ids(plan.targets.size());
  for (std::size_t i = 0; i < plan.targets.size(); ++i) {
    ids[i] = plan.targets[i].id();
    try {
      targets[i] = build_target(plan.targets[i]);
      save_target(*targets[i], out / "targets");
      say("target " + ids[i] + " ready, bonds up to " + std::to_string(targets[i]->state.max_bond()));
    } catch (const std::exception& e) {
      target_errors[i] = e.what();
      say("target " + ids[i] + " failed: " + e.what());
    }
  }

  std::vector<Cell> cells;
  for (std::size_t t = 0; t < plan.targets.size(); ++t) {
    for (auto kind : plan.kinds) {
      for (int sweeps : plan.sweeps) {
        for (auto seed : plan.seeds) cells.push_back({t, kind, sweeps, seed});
      }
    }
  }

  std::vector<CellOutcome> outcomes(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const std::string name = cell_name(ids[c.target], c.kind, c.sweeps, c.seed);
      if (!targets[c.target]) {
        outcomes[i].error = "target construction failed: " + target_errors[c.target];
        continue;
      }
      try {
        ProtocolSpec spec;
        spec.kind = c.kind;
        spec.num_layers = plan.k_max;
        spec.sweeps_per_stage = c.sweeps;
        spec.learning_rate = plan.learning_rate;
        spec.seed = c.seed;
        spec.budget_matching = plan.budget_matching;
        spec.retain_circuits = plan.save_circuits;
        spec.backend = plan.backend;
        auto report = run_protocol(targets[c.target]->state, spec, ids[c.target]);
        write_json(out / "reports" / (name + ".json"), to_json(report));
        for (std::size_t k = 0; k < report.circuits.size(); ++k) {
          if (static_cast<int>(k) + 1 < plan.k_min) continue;
          save_circuit(report.circuits[k],
                       out / "circuits" / (name + "_K" + std::to_string(k + 1) + ".circuit"));
        }
        report.circuits.clear();
        say("done " + name + "  1-f=" + format_number(report.rows.back().infidelity));
        outcomes[i].report = std::move(report);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
        say("failed " + name + ": " + e.what());
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(plan.threads, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  BenchmarkResult result;
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (!outcomes[i].report) {
      result.failures.push_back({ids[c.target], std::string(protocol_name(c.kind)), c.sweeps, c.seed,
                                 outcomes[i].error});
      failures.push_back({{"target", ids[c.target]},
                          {"kind", protocol_name(c.kind)},
                          {"T", c.sweeps},
                          {"seed", c.seed},
                          {"error", outcomes[i].error}});
      continue;
    }
    const auto& rep = *outcomes[i].report;
    for (const auto& row : rep.rows) {
      if (row.k < plan.k_min) continue;
      result.rows.push_back({ids[c.target], c.kind, row.k, c.sweeps, c.seed, row.infidelity,
                             row.updates, row.seconds});
    }
    result.reports.push_back(std::move(*outcomes[i].report));
  }
  result.summary_csv = out / "summary.csv";
  std::ofstream csv(result.summary_csv);
  if (!csv) throw std::runtime_error("cannot write " + result.summary_csv.string());
  write_summary_csv(result.rows, csv);
  write_json(out / "failures.json", failures);
  write_json(out / "plan.json", to_json(plan));
  return result;
}

CostEstimate estimate_cost(int num_sites, Index max_chi, int num_layers, int sweeps,
                           ProtocolKind kind, bool budget_matching) {
  if (num_sites < 1 || max_chi < 1 || num_layers < 1 || sweeps < 1) {
    throw std::invalid_argument("estimate_cost: arguments must be positive");
  }
  CostEstimate c;
  const double chi = static_cast<double>(max_chi);
  const double k = num_layers;
  c.mps_cost = num_sites * chi * chi * chi;
  c.effective_sweeps = budget_matching ? matched_budget(num_layers, sweeps, num_sites) : sweeps;
  c.decomposition_cost = c.mps_cost * k;
  c.optimization_cost = c.mps_cost * k * c.effective_sweeps;
  c.sequential_optimization_cost = c.mps_cost * (k * (k + 1) / 2.0) * sweeps;
  c.k_min = static_cast<int>(std::ceil(std::log2(chi)));
  switch (kind) {
    case ProtocolKind::d_all: c.protocol_cost = c.decomposition_cost; break;
    case ProtocolKind::iter_di_oi:
      c.protocol_cost = c.decomposition_cost + c.mps_cost * k * sweeps;
      break;
    case ProtocolKind::o_all: c.protocol_cost = c.optimization_cost; break;
    case ProtocolKind::dall_oall:
      c.protocol_cost = c.decomposition_cost + c.optimization_cost;
      break;
    case ProtocolKind::iter_ii_oall: c.protocol_cost = c.sequential_optimization_cost; break;
    case ProtocolKind::iter_di_oall:
      c.protocol_cost = c.decomposition_cost + c.sequential_optimization_cost;
      break;
  }
  return c;
}

std::vector<std::filesystem::path> emit_plot_data(const std::vector<DecompositionReport>& reports,
                                                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::map<std::pair<std::string, int>, std::vector<const DecompositionReport*>> groups;
  for (const auto& r : reports) groups[{r.target_id, r.sweeps_per_stage}].push_back(&r);
  std::vector<std::filesystem::path> written;
  for (const auto& [key, group] : groups) {
    const auto path = dir / ("plot_" + key.first + "_T" + std::to_string(key.second) + ".csv");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "# infidelity 1-f versus depth K for target " << key.first << ", T=" << key.second
       << "; position counts sweeps within a depth (0 = no optimization)\n"
       << "# plot infidelity on a logarithmic axis\n"
       << "kind,seed,K,position,infidelity\n";
    for (const auto* r : group) {
      for (const auto& row : r->rows) {
        if (row.trace.empty()) {
          os << protocol_name(r->kind) << ',' << r->seed << ',' << row.k << ",0,"
             << format_number(row.infidelity) << '\n';
          continue;
        }
        for (std::size_t p = 0; p < row.trace.size(); ++p) {
          os << protocol_name(r->kind) << ',' << r->seed << ',' << row.k << ',' << p + 1 << ','
             << format_number(row.trace[p]) << '\n';
        }
      }
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace mpsqc
