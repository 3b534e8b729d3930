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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mpsqc/bench.hpp"

namespace {

using namespace mpsqc;

struct DecomposeArgs {
  std::string target;
  std::string protocol = "Iter_Di_Oall";
  int layers = 6;
  int sweeps = 100;
  double learning_rate = 0.6;
  std::uint64_t seed = 0;
  bool budget_match = false;
  std::string out = "circuit.circuit";
};

int run_decompose(const DecomposeArgs& a) {
  const Mps target = load_mps(std::filesystem::path(a.target));
  ProtocolSpec spec;
  spec.kind = parse_protocol(a.protocol);
  spec.num_layers = a.layers;
  spec.sweeps_per_stage = a.sweeps;
  spec.learning_rate = a.learning_rate;
  spec.seed = a.seed;
  spec.budget_matching = a.budget_match;
  spec.retain_circuits = true;
  const auto id = std::filesystem::path(a.target).stem().string();
  auto report = run_protocol(target, spec, id);

  const std::filesystem::path out(a.out);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  save_circuit(report.circuits.back(), out);
  report.circuits.clear();
  auto report_path = out;
  report_path += ".json";
  std::ofstream(report_path) << to_json(report).dump(2) << '\n';

  std::printf("%-4s %-18s %-10s %-8s\n", "K", "infidelity", "updates", "sweeps");
  for (const auto& r : report.rows) {
    std::printf("%-4d %-18s %-10lld %-8d\n", r.k, format_number(r.infidelity).c_str(), r.updates,
                r.sweeps);
  }
  std::printf("circuit: %s\nreport:  %s\n", out.c_str(), report_path.c_str());
  return 0;
}

int run_bench(const std::string& plan_path, const std::string& out, int threads) {
  auto plan = load_plan(plan_path);
  if (!out.empty()) plan.output_dir = out;
  if (threads > 0) plan.threads = threads;
  const auto result = run_benchmark(plan, &std::cerr);
  emit_plot_data(result.reports, plan.output_dir / "plots");
  std::printf("%zu rows, %zu failed cells\nsummary: %s\n", result.rows.size(),
              result.failures.size(), result.summary_csv.c_str());
  return result.failures.empty() ? 0 : 2;
}

int run_targets(const std::string& out, std::uint64_t seed, Index max_chi) {
  for (auto d : benchmark_targets(seed)) {
    d.max_chi = max_chi;
    const auto t = build_target(d);
    const auto path = save_target(t, out);
    std::printf("%-28s bonds<=%-4lld %s\n", d.id().c_str(), static_cast<long long>(t.state.max_bond()),
                path.c_str());
  }
  return 0;
}

int run_estimate(int sites, Index chi, int layers, int sweeps, const std::string& protocol,
                 bool budget_match) {
  const auto kind = parse_protocol(protocol);
  const auto c = estimate_cost(sites, chi, layers, sweeps, kind, budget_match);
  std::printf("N=%d chi=%lld K=%d T=%d T'=%d\n", sites, static_cast<long long>(chi), layers, sweeps,
              c.effective_sweeps);
  std::printf("mps contraction         %.6g\n", c.mps_cost);
  std::printf("decomposition           %.6g\n", c.decomposition_cost);
  std::printf("flat optimization       %.6g\n", c.optimization_cost);
  std::printf("sequential optimization %.6g\n", c.sequential_optimization_cost);
  std::printf("%-23s %.6g\n", protocol.c_str(), c.protocol_cost);
  std::printf("K_min                   %d\n", c.k_min);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encode matrix product states into staircase quantum circuits"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "Decompose one target MPS file into a circuit");
  decompose->add_option("--target", dec.target, "Target .mps file")->required()->check(CLI::ExistingFile);
  decompose->add_option("--protocol", dec.protocol, "D_all, Iter_Di_Oi, O_all, Dall_Oall, Iter_Ii_Oall, Iter_Di_Oall")
      ->capture_default_str();
  decompose->add_option("--layers", dec.layers, "Number of layers K")->capture_default_str()->check(CLI::PositiveNumber);
  decompose->add_option("--sweeps", dec.sweeps, "Sweeps per stage T")->capture_default_str()->check(CLI::NonNegativeNumber);
  decompose->add_option("--learning-rate", dec.learning_rate, "Learning rate r")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  decompose->add_option("--seed", dec.seed, "Seed for random initial layers")->capture_default_str();
  decompose->add_flag("--budget-match", dec.budget_match, "Match sweep budgets of flat protocols");
  decompose->add_option("--out", dec.out, "Output circuit file")->capture_default_str();

  std::string plan_path, bench_out;
  int threads = 0;
  auto* bench = app.add_subcommand("bench", "Run a benchmark plan");
  bench->add_option("plan", plan_path, "Plan file (JSON)")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "Override the plan's output directory");
  bench->add_option("--threads", threads, "Override the plan's worker count")->check(CLI::PositiveNumber);

  std::string targets_out = "targets";
  std::uint64_t targets_seed = 0;
  Index targets_chi = 64;
  auto* targets = app.add_subcommand("targets", "Generate and save the benchmark targets");
  targets->add_option("--out", targets_out, "Output directory")->capture_default_str();
  targets->add_option("--seed", targets_seed, "Seed of the random MPS target")->capture_default_str();
  targets->add_option("--max-chi", targets_chi, "Bond dimension cap")->capture_default_str();

  int est_sites = 12, est_layers = 6, est_sweeps = 100;
  Index est_chi = 64;
  std::string est_protocol = "Iter_Di_Oall";
  bool est_budget = false;
  auto* estimate = app.add_subcommand("estimate", "Print abstract cost estimates");
  estimate->add_option("--sites", est_sites, "Number of qubits N")->capture_default_str();
  estimate->add_option("--max-chi", est_chi, "Bond dimension chi")->capture_default_str();
  estimate->add_option("--layers", est_layers, "Number of layers K")->capture_default_str();
  estimate->add_option("--sweeps", est_sweeps, "Sweeps per stage T")->capture_default_str();
  estimate->add_option("--protocol", est_protocol, "Protocol kind")->capture_default_str();
  estimate->add_flag("--budget-match", est_budget, "Use the matched flat budget");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*decompose) return run_decompose(dec);
    if (*bench) return run_bench(plan_path, bench_out, threads);
    if (*targets) return run_targets(targets_out, targets_seed, targets_chi);
    if (*estimate) return run_estimate(est_sites, est_chi, est_layers, est_sweeps, est_protocol, est_budget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
