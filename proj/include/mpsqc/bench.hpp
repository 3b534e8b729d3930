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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpsqc/protocols.hpp"
#include "mpsqc/targets.hpp"

namespace mpsqc {

/// A grid of (target, protocol, T, seed) cells, each run from k_min to k_max layers.
struct BenchmarkPlan {
  std::vector<TargetDescriptor> targets;
  std::vector<ProtocolKind> kinds;
  int k_min = 1;
  int k_max = 6;
  std::vector<int> sweeps = {10, 100, 1000};
  double learning_rate = 0.6;
  std::vector<std::uint64_t> seeds = {0};
  bool budget_matching = true;
  int threads = 1;
  bool save_circuits = true;
  CacheBackend backend = CacheBackend::automatic;
  std::filesystem::path output_dir = "bench_out";

  /// Throws std::invalid_argument on an empty grid or an invalid depth range.
  void validate() const;
};

nlohmann::json to_json(const BenchmarkPlan& plan);
BenchmarkPlan plan_from_json(const nlohmann::json& j);
BenchmarkPlan load_plan(const std::filesystem::path& path);

struct SummaryRow {
  std::string target;
  ProtocolKind kind = ProtocolKind::d_all;
  int k = 0;
  int sweeps = 0;
  std::uint64_t seed = 0;
  double infidelity = 1.0;
  long long updates = 0;
  double seconds = 0.0;
};

struct CellFailure {
  std::string target;
  std::string kind;
  int sweeps = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct BenchmarkResult {
  std::vector<DecompositionReport> reports;  // successful cells, in grid order
  std::vector<SummaryRow> rows;
  std::vector<CellFailure> failures;
  std::filesystem::path summary_csv;
};

/// Runs every cell of the plan on `plan.threads` workers. Each cell writes
/// its own report (reports/<cell>.json) and, optionally, one circuit per
/// depth (circuits/<cell>_K<k>.circuit); targets go to targets/. The merged
/// summary.csv and failures.json are written once all cells are done.
/// Output is independent of the thread count apart from timings.
BenchmarkResult run_benchmark(const BenchmarkPlan& plan, std::ostream* log = nullptr);

/// File stem shared by a cell's report and circuits.
std::string cell_name(const std::string& target_id, ProtocolKind kind, int sweeps,
                      std::uint64_t seed);

/// 12 significant digits.
std::string format_number(double x);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os);

struct CostEstimate {
  double mps_cost = 0.0;                      // N chi^3
  double decomposition_cost = 0.0;            // N chi^3 K
  double optimization_cost = 0.0;             // N chi^3 K T'
  double sequential_optimization_cost = 0.0;  // N chi^3 K(K+1)/2 T
  double protocol_cost = 0.0;                 // total for the requested kind
  int effective_sweeps = 0;                   // T'
  int k_min = 0;                              // ceil(log2 chi)
};

/// Abstract operation counts. T' is matched_budget(K, T) when
/// `budget_matching`, otherwise T.
CostEstimate estimate_cost(int num_sites, Index max_chi, int num_layers, int sweeps,
                           ProtocolKind kind, bool budget_matching = false);

/// One long-format table per (target, T): columns kind,seed,K,position,infidelity.
/// Optimizing kinds contribute one line per sweep (position 1..), D_all one
/// line per depth at position 0. Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<DecompositionReport>& reports,
                                                  const std::filesystem::path& dir);

}  // namespace mpsqc
